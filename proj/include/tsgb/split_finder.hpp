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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "tsgb/dataset.hpp"
#include "tsgb/gain.hpp"
#include "tsgb/objective.hpp"

namespace tsgb {

struct SplitParams {
  double lambda = 1.0;
  double gamma = 0.0;
  /// Minimum hessian sum on each side of a split.
  double min_child_weight = 1.0;
};

/// Best feature-wise split of one node, with its per-task gain decomposition.
struct SplitCandidate {
  FeatureIndex feature = -1;
  double threshold = 0.0;
  bool default_left = true;
  double gain = 0.0;
  NodeStats left;
  NodeStats right;
  std::vector<double> task_gains;
  double r_neg = 0.0;
};

/// Present values of every feature, sorted ascending (ties by row). Built
/// once per dataset and shared by every split search over it.
class ColumnIndex {
 public:
  struct Item {
    double value;
    RowIndex row;
  };

  explicit ColumnIndex(const Dataset& ds) : columns_(ds.n_features()) {
    std::vector<std::size_t> sizes(ds.n_features(), 0);
    for (RowIndex r = 0; r < ds.n_rows(); ++r) {
      for (const auto& e : ds.row(r)) ++sizes[static_cast<std::size_t>(e.feature)];
    }
    for (std::size_t f = 0; f < sizes.size(); ++f) columns_[f].reserve(sizes[f]);
    for (RowIndex r = 0; r < ds.n_rows(); ++r) {
      for (const auto& e : ds.row(r)) columns_[static_cast<std::size_t>(e.feature)].push_back({e.value, r});
    }
    for (auto& col : columns_) {
      std::sort(col.begin(), col.end(), [](const Item& a, const Item& b) {
        return a.value < b.value || (a.value == b.value && a.row < b.row);
      });
    }
  }

  std::span<const Item> column(FeatureIndex f) const { return columns_[static_cast<std::size_t>(f)]; }
  std::size_t n_features() const { return columns_.size(); }

 private:
  std::vector<std::vector<Item>> columns_;
};

/// Split threshold between two adjacent distinct values a < b. Falls back to
/// b when the midpoint rounds onto a, so that a < t <= b always holds.
inline double midpoint_threshold(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return mid > a ? mid : b;
}

/// Exact greedy split search with learned missing-value direction. Searches
/// all nodes of a tree level in one pass per feature.
///
/// Ties are broken toward the lowest feature index, then the lowest
/// threshold, then default-left.
class SplitFinder {
 public:
  SplitFinder(const Dataset& ds, const ColumnIndex& columns) : ds_(ds), columns_(columns) {}

  std::vector<std::optional<SplitCandidate>> find(std::span<const NodeStats* const> nodes,
                                                  const GradStats& grads,
                                                  std::span<const FeatureIndex> features,
                                                  const SplitParams& params, int n_threads = 1) const {
    std::vector<std::optional<SplitCandidate>> out(nodes.size());
    std::vector<std::int32_t> slot_of(ds_.n_rows(), -1);
    std::vector<std::size_t> active;  // node positions with >= 2 rows
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (nodes[k]->count() < 2) continue;
      const auto slot = static_cast<std::int32_t>(active.size());
      for (RowIndex r : nodes[k]->rows) slot_of[r] = slot;
      active.push_back(k);
    }
    if (active.empty() || features.empty()) return out;

    std::vector<FeatureIndex> order(features.begin(), features.end());
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());

    std::vector<GradPair> totals;
    std::vector<std::size_t> counts;
    for (auto k : active) {
      totals.push_back(nodes[k]->sums());
      counts.push_back(nodes[k]->count());
    }

    const std::size_t n_workers =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, n_threads)), 1, order.size());
    std::vector<std::vector<Best>> partial(n_workers, std::vector<Best>(active.size()));
    auto run_chunk = [&](std::size_t w) {
      const std::size_t lo = order.size() * w / n_workers;
      const std::size_t hi = order.size() * (w + 1) / n_workers;
      Scratch scratch(active.size());
      for (std::size_t i = lo; i < hi; ++i) {
        scan_feature(order[i], slot_of, totals, counts, grads, params, scratch, partial[w]);
      }
    };
    if (n_workers == 1) {
      run_chunk(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(run_chunk, w);
      for (auto& t : pool) t.join();
    }
    // chunks cover ascending feature ranges; improves() keeps the earliest
    std::vector<Best> best(active.size());
    for (const auto& chunk : partial) {
      for (std::size_t s = 0; s < best.size(); ++s) {
        if (chunk[s].valid && (!best[s].valid || improves(chunk[s].gain, best[s].gain))) best[s] = chunk[s];
      }
    }

    for (std::size_t s = 0; s < active.size(); ++s) {
      if (!best[s].valid || !(best[s].gain > 0.0)) continue;
      out[active[s]] = materialize(*nodes[active[s]], best[s], grads, params);
    }
    return out;
  }

 private:
  // Gains closer than this (relative) are ties: the same partition reached
  // through different features differs only by summation rounding.
  static constexpr double kTieTolerance = 1e-12;

  static bool improves(double gain, double incumbent) {
    return gain > incumbent + kTieTolerance * std::max(1.0, std::abs(incumbent));
  }

  struct Best {
    bool valid = false;
    double gain = -std::numeric_limits<double>::infinity();
    FeatureIndex feature = -1;
    double threshold = 0.0;
    bool default_left = true;
  };

  struct Scratch {
    explicit Scratch(std::size_t n) : present(n), count(n), prefix(n), last(n), has_last(n) {}
    std::vector<GradPair> present;
    std::vector<std::size_t> count;
    std::vector<GradPair> prefix;
    std::vector<double> last;
    std::vector<char> has_last;
  };

  void scan_feature(FeatureIndex f, const std::vector<std::int32_t>& slot_of, const std::vector<GradPair>& totals,
                    const std::vector<std::size_t>& counts, const GradStats& grads, const SplitParams& p,
                    Scratch& sc, std::vector<Best>& best) const {
    const auto col = columns_.column(f);
    std::fill(sc.present.begin(), sc.present.end(), GradPair{});
    std::fill(sc.count.begin(), sc.count.end(), 0);
    std::fill(sc.prefix.begin(), sc.prefix.end(), GradPair{});
    std::fill(sc.has_last.begin(), sc.has_last.end(), 0);
    for (const auto& item : col) {
      const auto s = slot_of[item.row];
      if (s < 0) continue;
      sc.present[static_cast<std::size_t>(s)] += GradPair{grads.g[item.row], grads.h[item.row]};
      ++sc.count[static_cast<std::size_t>(s)];
    }
    auto consider = [&](std::size_t s, const GradPair& left, const GradPair& right, double thr, bool dleft) {
      if (left.H < p.min_child_weight || right.H < p.min_child_weight) return;
      const double gain = split_gain(left, right, p.lambda, p.gamma);
      if (!best[s].valid || improves(gain, best[s].gain)) best[s] = {true, gain, f, thr, dleft};
    };
    for (const auto& item : col) {
      const auto si = slot_of[item.row];
      if (si < 0) continue;
      const auto s = static_cast<std::size_t>(si);
      if (sc.has_last[s] && item.value != sc.last[s]) {
        const double thr = midpoint_threshold(sc.last[s], item.value);
        const GradPair rest = sc.present[s] - sc.prefix[s];
        if (sc.count[s] < counts[s]) {
          const GradPair missing = totals[s] - sc.present[s];
          consider(s, sc.prefix[s] + missing, rest, thr, true);
          consider(s, sc.prefix[s], rest + missing, thr, false);
        } else {
          consider(s, sc.prefix[s], rest, thr, true);
        }
      }
      sc.prefix[s] += GradPair{grads.g[item.row], grads.h[item.row]};
      sc.last[s] = item.value;
      sc.has_last[s] = 1;
    }
  }

  SplitCandidate materialize(const NodeStats& node, const Best& b, const GradStats& grads,
                             const SplitParams& p) const {
    std::vector<RowIndex> left_rows, right_rows;
    for (RowIndex r : node.rows) {
      const auto v = ds_.value(r, b.feature);
      const bool go_left = v ? *v < b.threshold : b.default_left;
      (go_left ? left_rows : right_rows).push_back(r);
    }
    SplitCandidate c;
    c.feature = b.feature;
    c.threshold = b.threshold;
    c.default_left = b.default_left;
    const std::size_t n_tasks = node.per_task.size();
    c.left = NodeStats::from_rows(std::move(left_rows), ds_.tasks(), grads, n_tasks);
    c.right = NodeStats::from_rows(std::move(right_rows), ds_.tasks(), grads, n_tasks);
    c.gain = split_gain(c.left.sums(), c.right.sums(), p.lambda, p.gamma);
    c.task_gains = task_gains(node, c.left, c.right, p.lambda, p.gamma);
    const auto counts = task_counts(node);
    c.r_neg = neg_task_gain_ratio(c.task_gains, counts);
    return c;
  }

  const Dataset& ds_;
  const ColumnIndex& columns_;
};

/// Single-node convenience wrapper; builds a column index per call.
inline std::optional<SplitCandidate> find_best_feature_split(const NodeStats& node, const Dataset& ds,
                                                             const GradStats& grads,
                                                             std::span<const FeatureIndex> features,
                                                             const SplitParams& params) {
  if (node.count() < 2) return std::nullopt;
  ColumnIndex columns(ds);
  SplitFinder finder(ds, columns);
  const NodeStats* ptr = &node;
  return finder.find(std::span<const NodeStats* const>(&ptr, 1), grads, features, params)[0];
}

}  // namespace tsgb
