// Copyright 2026 The TSGB Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <vector>

#include "tsgb/common.hpp"
#include "tsgb/objective.hpp"

namespace tsgb {

/// Gradient and hessian sums of a row set.
struct GradPair {
  double G = 0.0;
  double H = 0.0;
  GradPair& operator+=(const GradPair& o) {
    G += o.G;
    H += o.H;
    return *this;
  }
  friend GradPair operator+(GradPair a, const GradPair& b) { return a += b; }
  friend GradPair operator-(GradPair a, const GradPair& b) { return {a.G - b.G, a.H - b.H}; }
  friend bool operator==(const GradPair&, const GradPair&) = default;
};

/// Sums restricted to one task's rows at a node: |I ∩ S^t|, G^t, H^t.
struct TaskStat {
  std::size_t count = 0;
  double G = 0.0;
  double H = 0.0;
};

/// Statistics of the rows at a tree node. The global sums are defined as the
/// task-ordered sum of the per-task sums, never as an independent pass, so
/// that gain decompositions add up to machine precision.
struct NodeStats {
  std::vector<RowIndex> rows;
  std::vector<TaskStat> per_task;  // indexed by dense task id
  double G = 0.0;
  double H = 0.0;

  std::size_t count() const { return rows.size(); }
  GradPair sums() const { return {G, H}; }

  static NodeStats from_rows(std::vector<RowIndex> rows, std::span<const TaskId> task_of,
                             const GradStats& grads, std::size_t n_tasks) {
    NodeStats s;
    s.rows = std::move(rows);
    s.per_task.assign(n_tasks, {});
    for (RowIndex r : s.rows) {
      auto& ts = s.per_task[static_cast<std::size_t>(task_of[r])];
      ++ts.count;
      ts.G += grads.g[r];
      ts.H += grads.h[r];
      // totals accumulate in row order, independent of the task partition
      s.G += grads.g[r];
      s.H += grads.h[r];
    }
    return s;
  }
};

/// w* = -G / (H + lambda), with the L1 soft threshold on G applied first and
/// the result scaled by the learning rate eta.
inline double optimal_leaf_weight(double G, double H, double lambda, double alpha = 0.0, double eta = 1.0) {
  if (!(H + lambda > 0.0)) throw NumericError("leaf weight undefined: H + lambda <= 0");
  double g = G;
  if (alpha > 0.0) {
    if (G > alpha) {
      g = G - alpha;
    } else if (G < -alpha) {
      g = G + alpha;
    } else {
      g = 0.0;
    }
  }
  return eta * (-g / (H + lambda));
}

/// G^2 / (H + lambda): twice the objective reduction of a single optimal leaf.
inline double leaf_score(const GradPair& s, double lambda) { return s.G * s.G / (s.H + lambda); }

/// Gain of splitting a node into (left, right).
inline double split_gain(const GradPair& left, const GradPair& right, double lambda, double gamma) {
  const GradPair parent = left + right;
  return 0.5 * (leaf_score(left, lambda) + leaf_score(right, lambda) - leaf_score(parent, lambda)) - gamma;
}

namespace detail {

// G^t w + 1/2 (H^t + share_t lambda) w^2 for one task at one node.
inline double task_objective(const TaskStat& ts, std::size_t node_count, double w, double lambda) {
  if (ts.count == 0) return 0.0;
  const double share = static_cast<double>(ts.count) / static_cast<double>(node_count);
  return ts.G * w + 0.5 * (ts.H + share * lambda) * w * w;
}

}  // namespace detail

/// Per-task share of a split's gain, given the global optimal weights of the
/// parent and the two children (unshrunk, no L1). lambda and gamma are
/// pro-rated by each task's share of rows at the node.
inline std::vector<double> task_gains(const NodeStats& parent, const NodeStats& left, const NodeStats& right,
                                      double w_parent, double w_left, double w_right, double lambda,
                                      double gamma) {
  if (parent.count() == 0 || left.count() == 0 || right.count() == 0) {
    throw Error("task_gains: degenerate split with an empty node");
  }
  const std::size_t n_tasks = parent.per_task.size();
  std::vector<double> gains(n_tasks, 0.0);
  for (std::size_t t = 0; t < n_tasks; ++t) {
    const auto& pt = parent.per_task[t];
    if (pt.count == 0) continue;
    const double share = static_cast<double>(pt.count) / static_cast<double>(parent.count());
    gains[t] = detail::task_objective(pt, parent.count(), w_parent, lambda) -
               detail::task_objective(left.per_task[t], left.count(), w_left, lambda) -
               detail::task_objective(right.per_task[t], right.count(), w_right, lambda) - share * gamma;
  }
  return gains;
}

inline std::vector<double> task_gains(const NodeStats& parent, const NodeStats& left, const NodeStats& right,
                                      double lambda, double gamma) {
  return task_gains(parent, left, right, optimal_leaf_weight(parent.G, parent.H, lambda),
                    optimal_leaf_weight(left.G, left.H, lambda), optimal_leaf_weight(right.G, right.H, lambda),
                    lambda, gamma);
}

/// Fraction of the node's rows that belong to tasks with strictly negative
/// task gain.
inline double neg_task_gain_ratio(std::span<const double> gains, std::span<const std::size_t> counts) {
  std::size_t total = 0, negative = 0;
  for (std::size_t t = 0; t < gains.size(); ++t) {
    total += counts[t];
    if (gains[t] < 0.0) negative += counts[t];
  }
  if (total == 0) throw Error("neg_task_gain_ratio: no rows");
  return static_cast<double>(negative) / static_cast<double>(total);
}

inline std::vector<std::size_t> task_counts(const NodeStats& s) {
  std::vector<std::size_t> out;
  out.reserve(s.per_task.size());
  for (const auto& ts : s.per_task) out.push_back(ts.count);
  return out;
}

}  // namespace tsgb
