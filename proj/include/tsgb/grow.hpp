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
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "tsgb/config.hpp"
#include "tsgb/dataset.hpp"
#include "tsgb/gain.hpp"
#include "tsgb/random.hpp"
#include "tsgb/split_finder.hpp"
#include "tsgb/tree.hpp"

namespace tsgb {

struct FeatureWiseSplit {
  SplitCandidate candidate;
};

struct TaskWiseSplit {
  TaskSet left_tasks;   // tasks with negative task gain
  TaskSet right_tasks;  // tasks with non-negative task gain
  SplitCandidate source;
};

struct LeafDecision {
  double weight = 0.0;
};

using SplitDecision = std::variant<FeatureWiseSplit, TaskWiseSplit, LeafDecision>;

/// When a node may be turned into a task-wise split.
struct TaskSplitTrigger {
  enum class Kind { kNever, kThreshold, kForced };
  Kind kind = Kind::kNever;
  double R = 1.0;     // kThreshold: fire when r_neg > R
  bool fire = false;  // kForced: outcome of an external draw

  static TaskSplitTrigger never() { return {}; }
  static TaskSplitTrigger threshold(double r) { return {Kind::kThreshold, r, false}; }
  static TaskSplitTrigger forced(bool f) { return {Kind::kForced, 1.0, f}; }

  bool fires(const SplitCandidate& c) const {
    switch (kind) {
      case Kind::kNever: return false;
      case Kind::kThreshold: return c.r_neg > R;
      case Kind::kForced: return fire;
    }
    return false;
  }
};

/// Leaf when there is no candidate or the depth limit is hit; task-wise when
/// the trigger fires and both task groups are nonempty; feature-wise otherwise.
inline SplitDecision decide_split(const std::optional<SplitCandidate>& candidate, const TaskSplitTrigger& trigger,
                                  const NodeStats& node, int depth, const TrainConfig& cfg) {
  if (!candidate || depth >= cfg.max_depth) {
    return LeafDecision{optimal_leaf_weight(node.G, node.H, cfg.lambda, cfg.alpha, cfg.learning_rate)};
  }
  if (trigger.fires(*candidate)) {
    TaskSet negative, non_negative;
    for (std::size_t t = 0; t < node.per_task.size(); ++t) {
      if (node.per_task[t].count == 0) continue;
      (candidate->task_gains[t] < 0.0 ? negative : non_negative).insert(static_cast<TaskId>(t));
    }
    if (!negative.empty() && !non_negative.empty()) {
      return TaskWiseSplit{std::move(negative), std::move(non_negative), *candidate};
    }
  }
  return FeatureWiseSplit{*candidate};
}

inline SplitDecision decide_split(const std::optional<SplitCandidate>& candidate, double R, const NodeStats& node,
                                  int depth, const TrainConfig& cfg) {
  return decide_split(candidate, TaskSplitTrigger::threshold(R), node, depth, cfg);
}

/// Split-search record of one node where a feature-wise candidate existed.
struct NodeDiagnostics {
  int tree = 0;
  int node = 0;
  int depth = 0;
  std::size_t n_rows = 0;
  double gain = 0.0;
  double r_neg = 0.0;
  NodeKind decision = NodeKind::kLeaf;
  std::vector<double> task_gains;
  std::vector<std::size_t> task_counts;
};

struct GrownTree {
  Tree tree;
  std::vector<NodeDiagnostics> diagnostics;
};

/// Per-tree inputs that are not hyperparameters.
struct GrowContext {
  int tree_index = 0;
  /// How task-wise splits are triggered in this tree.
  TrainMode mode = TrainMode::kPooled;
};

namespace detail {

inline std::vector<TaskCount> count_tasks(const NodeStats& s, std::span<const double> labels,
                                          std::span<const TaskId> task_of) {
  std::vector<TaskCount> out;
  std::vector<std::uint32_t> pos(s.per_task.size(), 0), neg(s.per_task.size(), 0);
  for (RowIndex r : s.rows) {
    auto t = static_cast<std::size_t>(task_of[r]);
    (labels[r] > 0.5 ? pos[t] : neg[t]) += 1;
  }
  for (std::size_t t = 0; t < s.per_task.size(); ++t) {
    if (s.per_task[t].count > 0) out.push_back({static_cast<TaskId>(t), pos[t], neg[t]});
  }
  return out;
}

inline std::vector<FeatureIndex> sample_features(std::span<const FeatureIndex> from, double fraction, Rng& rng) {
  std::vector<FeatureIndex> out(from.begin(), from.end());
  if (fraction >= 1.0 || out.empty()) return out;
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(fraction * static_cast<double>(out.size()))));
  rng.shuffle(std::span<FeatureIndex>(out));
  out.resize(std::min(keep, out.size()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Grows one tree level by level from `row_sample`. Split search sees only
/// the features in `tree_features` (subsampled again per level). Task-wise
/// splits count toward max_depth like any other split.
inline GrownTree grow_tree(const Dataset& ds, const ColumnIndex& columns, const GradStats& grads,
                           std::vector<RowIndex> row_sample, std::span<const FeatureIndex> tree_features,
                           const TrainConfig& cfg, const GrowContext& ctx, Rng& rng) {
  GrownTree out;
  auto& nodes = out.tree.nodes;
  const SplitParams params{cfg.lambda, cfg.gamma, cfg.min_child_weight};
  SplitFinder finder(ds, columns);

  struct Pending {
    std::int32_t id;
    NodeStats stats;
  };
  std::vector<Pending> level;
  nodes.emplace_back();
  level.push_back({0, NodeStats::from_rows(std::move(row_sample), ds.tasks(), grads, ds.n_tasks())});

  for (int depth = 0; !level.empty(); ++depth) {
    std::vector<std::optional<SplitCandidate>> candidates(level.size());
    if (depth < cfg.max_depth) {
      const auto features = detail::sample_features(tree_features, cfg.colsample_bylevel, rng);
      std::vector<const NodeStats*> ptrs;
      for (const auto& p : level) ptrs.push_back(&p.stats);
      candidates = finder.find(ptrs, grads, features, params, cfg.n_threads);
    }

    std::vector<Pending> next;
    for (std::size_t k = 0; k < level.size(); ++k) {
      auto& pending = level[k];
      const NodeStats& stats = pending.stats;
      const auto& cand = candidates[k];

      TaskSplitTrigger trigger;
      if (cand) {
        if (ctx.mode == TrainMode::kTsgb) {
          trigger = TaskSplitTrigger::threshold(cfg.R);
        } else if (ctx.mode == TrainMode::kTsgbLambda) {
          trigger = TaskSplitTrigger::forced(rng.bernoulli(cfg.tsgb_lambda));
        }
      }
      SplitDecision decision = decide_split(cand, trigger, stats, depth, cfg);

      TreeNode nd;
      nd.depth = depth;
      nd.n_rows = stats.count();
      nd.task_counts = detail::count_tasks(stats, ds.labels(), ds.tasks());

      NodeStats left, right;
      if (auto* fw = std::get_if<FeatureWiseSplit>(&decision)) {
        auto& c = fw->candidate;
        nd.kind = NodeKind::kFeature;
        nd.feature = c.feature;
        nd.threshold = c.threshold;
        nd.default_left = c.default_left;
        nd.gain = c.gain;
        nd.r_neg = c.r_neg;
        left = std::move(c.left);
        right = std::move(c.right);
      } else if (auto* tw = std::get_if<TaskWiseSplit>(&decision)) {
        const auto& c = tw->source;
        nd.kind = NodeKind::kTask;
        nd.left_tasks = tw->left_tasks;
        nd.feature = c.feature;
        nd.threshold = c.threshold;
        nd.default_left = c.default_left;
        nd.gain = c.gain;
        nd.r_neg = c.r_neg;
        std::vector<RowIndex> lrows, rrows;
        for (RowIndex r : stats.rows) (nd.left_tasks.contains(ds.task(r)) ? lrows : rrows).push_back(r);
        left = NodeStats::from_rows(std::move(lrows), ds.tasks(), grads, ds.n_tasks());
        right = NodeStats::from_rows(std::move(rrows), ds.tasks(), grads, ds.n_tasks());
      } else {
        nd.kind = NodeKind::kLeaf;
        nd.weight = std::get<LeafDecision>(decision).weight;
      }

      if (cand) {
        NodeDiagnostics d;
        d.tree = ctx.tree_index;
        d.node = pending.id;
        d.depth = depth;
        d.n_rows = stats.count();
        d.gain = cand->gain;
        d.r_neg = cand->r_neg;
        d.decision = nd.kind;
        d.task_gains = cand->task_gains;
        d.task_counts = task_counts(stats);
        out.diagnostics.push_back(std::move(d));
      }

      if (!nd.is_leaf()) {
        nd.left = static_cast<std::int32_t>(nodes.size());
        nd.right = nd.left + 1;
        nd.left_rows = left.count();
        nd.right_rows = right.count();
        nodes.emplace_back();
        nodes.emplace_back();
        next.push_back({nd.left, std::move(left)});
        next.push_back({nd.right, std::move(right)});
      }
      nodes[static_cast<std::size_t>(pending.id)] = std::move(nd);
    }
    level = std::move(next);
  }
  return out;
}

}  // namespace tsgb
