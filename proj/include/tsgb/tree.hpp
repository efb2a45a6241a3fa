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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tsgb/common.hpp"
#include "tsgb/config.hpp"
#include "tsgb/task_set.hpp"

namespace tsgb {

enum class NodeKind { kFeature, kTask, kLeaf };

inline std::string node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::kFeature: return "feature";
    case NodeKind::kTask: return "task";
    case NodeKind::kLeaf: return "leaf";
  }
  return "?";
}

/// Training rows of one task that reached a node, split by label.
struct TaskCount {
  TaskId task = 0;
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
  friend bool operator==(const TaskCount&, const TaskCount&) = default;
};

/// One node of a regression tree.
///
///  - kFeature: `value < threshold` goes left, missing follows default_left.
///  - kTask: tasks in left_tasks go left, every other task goes right.
///    `feature`/`threshold`/`default_left` keep the feature split that was
///    rejected in favour of the task split; they are annotations only.
///  - kLeaf: `weight` is the (shrunk) output.
struct TreeNode {
  NodeKind kind = NodeKind::kLeaf;
  FeatureIndex feature = -1;
  double threshold = 0.0;
  bool default_left = true;
  TaskSet left_tasks;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double weight = 0.0;

  // Training annotations.
  std::int32_t depth = 0;
  std::uint64_t n_rows = 0;
  std::uint64_t left_rows = 0;
  std::uint64_t right_rows = 0;
  double gain = 0.0;
  double r_neg = 0.0;
  std::vector<TaskCount> task_counts;

  bool is_leaf() const { return kind == NodeKind::kLeaf; }
};

/// Array-backed binary tree; node 0 is the root.
struct Tree {
  std::vector<TreeNode> nodes;

  std::size_t n_leaves() const {
    std::size_t n = 0;
    for (const auto& nd : nodes) n += nd.is_leaf() ? 1 : 0;
    return n;
  }

  std::size_t count(NodeKind k) const {
    std::size_t n = 0;
    for (const auto& nd : nodes) n += nd.kind == k ? 1 : 0;
    return n;
  }

  /// Throws ModelError on a structural defect: bad child links, a cycle or
  /// shared child, a feature index >= n_features, an empty or unbalanced
  /// task split, or a non-finite threshold or weight.
  void validate(std::size_t n_features) const {
    if (nodes.empty()) throw ModelError("tree has no nodes");
    std::vector<int> parents(nodes.size(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& nd = nodes[i];
      if (nd.is_leaf()) {
        if (!std::isfinite(nd.weight)) throw ModelError("non-finite leaf weight at node " + std::to_string(i));
        continue;
      }
      for (auto c : {nd.left, nd.right}) {
        if (c <= static_cast<std::int32_t>(i) || static_cast<std::size_t>(c) >= nodes.size()) {
          throw ModelError("bad child index at node " + std::to_string(i));
        }
        ++parents[static_cast<std::size_t>(c)];
      }
      if (nd.kind == NodeKind::kFeature) {
        if (nd.feature < 0 || static_cast<std::size_t>(nd.feature) >= n_features) {
          throw ModelError("feature index out of range at node " + std::to_string(i));
        }
        if (!std::isfinite(nd.threshold)) throw ModelError("non-finite threshold at node " + std::to_string(i));
      } else if (nd.left_tasks.empty()) {
        throw ModelError("task split with empty left task set at node " + std::to_string(i));
      }
    }
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      if (parents[i] != 1) throw ModelError("node " + std::to_string(i) + " does not have exactly one parent");
    }
  }
};

/// Index of the leaf reached by a sample. `known_tasks` is the number of
/// tasks the model was trained on; ids outside [0, known_tasks) are unseen.
template <typename RowAccessor>
std::int32_t route_leaf(const Tree& tree, const RowAccessor& row, TaskId task, std::size_t known_tasks,
                        UnseenTaskPolicy policy = UnseenTaskPolicy::kMajority) {
  const bool unseen = task < 0 || static_cast<std::size_t>(task) >= known_tasks;
  std::int32_t i = 0;
  while (true) {
    const auto& nd = tree.nodes[static_cast<std::size_t>(i)];
    switch (nd.kind) {
      case NodeKind::kLeaf:
        return i;
      case NodeKind::kFeature: {
        const auto v = row.value(nd.feature);
        const bool go_left = v ? *v < nd.threshold : nd.default_left;
        i = go_left ? nd.left : nd.right;
        break;
      }
      case NodeKind::kTask: {
        bool go_left;
        if (!unseen) {
          go_left = nd.left_tasks.contains(task);
        } else if (policy == UnseenTaskPolicy::kStrict) {
          throw RoutingError("unseen task id " + std::to_string(task));
        } else {
          go_left = nd.left_rows > nd.right_rows;
        }
        i = go_left ? nd.left : nd.right;
        break;
      }
    }
  }
}

template <typename RowAccessor>
double route(const Tree& tree, const RowAccessor& row, TaskId task, std::size_t known_tasks,
             UnseenTaskPolicy policy = UnseenTaskPolicy::kMajority) {
  return tree.nodes[static_cast<std::size_t>(route_leaf(tree, row, task, known_tasks, policy))].weight;
}

}  // namespace tsgb
