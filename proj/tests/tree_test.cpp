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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "tsgb/export.hpp"
#include "tsgb/grow.hpp"
#include "tsgb/model_io.hpp"
#include "tsgb/synthgen.hpp"
#include "tsgb/tree.hpp"

namespace tsgb {
namespace {

struct Fixture {
  Dataset ds;
  GradStats grads;
  ColumnIndex columns;
  explicit Fixture(Dataset d) : ds(std::move(d)), columns(ds) {
    std::vector<double> y(ds.labels().begin(), ds.labels().end());
    const std::vector<double> margins(ds.n_rows(), base_score(y, LossKind::kLogloss));
    grads = grad_hess(margins, ds.labels(), LossKind::kLogloss);
  }
  GrownTree grow(const TrainConfig& cfg, TrainMode mode) const {
    std::vector<FeatureIndex> features(ds.n_features());
    for (std::size_t f = 0; f < features.size(); ++f) features[f] = static_cast<FeatureIndex>(f);
    Rng rng(cfg.seed);
    return grow_tree(ds, columns, grads, testing::iota_rows(ds.n_rows()), features, cfg, {0, mode}, rng);
  }
};

Dataset conflict_data(int n_tasks, int rows, std::uint64_t seed) {
  SynthSpec s;
  s.n_tasks = n_tasks;
  s.rows_per_task = rows;
  s.n_features = 10;
  s.conflict_rate = 0.5;
  s.weight_scale = 1.0;
  s.seed = seed;
  return generate(s);
}

/// Nodes visited by a row, root first.
std::vector<std::int32_t> path_of(const Tree& tree, const Dataset& ds, RowIndex r) {
  std::vector<std::int32_t> path{0};
  const auto row = ds.row_view(r);
  while (!tree.nodes[static_cast<std::size_t>(path.back())].is_leaf()) {
    const auto& nd = tree.nodes[static_cast<std::size_t>(path.back())];
    bool left;
    if (nd.kind == NodeKind::kFeature) {
      const auto v = row.value(nd.feature);
      left = v ? *v < nd.threshold : nd.default_left;
    } else {
      left = nd.left_tasks.contains(ds.task(r));
    }
    path.push_back(left ? nd.left : nd.right);
  }
  return path;
}

TEST(GrowTree, PureNodeIsSingleLeaf) {
  testing::WarningCapture quiet;
  const Fixture fx(testing::make_dataset({{1}, {2}, {3}, {4}}, {1, 1, 1, 1}, {0, 0, 1, 1}));
  TrainConfig cfg;
  cfg.gamma = 0.1;
  cfg.min_child_weight = 0;
  const auto grown = fx.grow(cfg, TrainMode::kTsgb);
  ASSERT_EQ(grown.tree.nodes.size(), 1u);
  EXPECT_TRUE(grown.tree.nodes[0].is_leaf());
}

TEST(GrowTree, MaxDepthZeroIsSingleLeaf) {
  const Fixture fx(conflict_data(2, 100, 1));
  TrainConfig cfg;
  cfg.max_depth = 0;
  const auto grown = fx.grow(cfg, TrainMode::kTsgb);
  EXPECT_EQ(grown.tree.nodes.size(), 1u);
  EXPECT_TRUE(grown.diagnostics.empty());
}

TEST(GrowTree, RatioOneNeverSplitsByTask) {
  const Fixture fx(conflict_data(4, 300, 2));
  TrainConfig cfg;
  cfg.R = 1.0;
  cfg.min_child_weight = 0.5;
  const auto grown = fx.grow(cfg, TrainMode::kTsgb);
  EXPECT_EQ(grown.tree.count(NodeKind::kTask), 0u);
  EXPECT_GT(grown.tree.count(NodeKind::kFeature), 0u);
}

TEST(GrowTree, TaskNodesSendNegativeGainTasksLeft) {
  const Fixture fx(conflict_data(4, 400, 3));
  TrainConfig cfg;
  cfg.R = 0.2;
  cfg.max_depth = 4;
  cfg.lambda = 1.0;
  cfg.min_child_weight = 0.5;
  const auto grown = fx.grow(cfg, TrainMode::kTsgb);
  const Tree& tree = grown.tree;
  ASSERT_GT(tree.count(NodeKind::kTask), 0u);

  std::vector<std::vector<RowIndex>> at(tree.nodes.size());
  for (RowIndex r = 0; r < fx.ds.n_rows(); ++r) {
    for (auto n : path_of(tree, fx.ds, r)) at[static_cast<std::size_t>(n)].push_back(r);
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& nd = tree.nodes[i];
    EXPECT_EQ(at[i].size(), nd.n_rows) << "node " << i;
    if (nd.kind != NodeKind::kTask) continue;
    // rebuild the rejected feature split from the node's rows and re-derive
    // every task's gain from per-row sums
    std::vector<RowIndex> l, rr;
    for (RowIndex r : at[i]) {
      const auto v = fx.ds.value(r, nd.feature);
      (v ? *v < nd.threshold : nd.default_left) ? l.push_back(r) : rr.push_back(r);
    }
    auto sums = [&](const std::vector<RowIndex>& rows) {
      double G = 0, H = 0;
      for (auto r : rows) G += fx.grads.g[r], H += fx.grads.h[r];
      return std::pair{G, H};
    };
    const auto [Gp, Hp] = sums(at[i]);
    const auto [Gl, Hl] = sums(l);
    const auto [Gr, Hr] = sums(rr);
    const double wp = -Gp / (Hp + cfg.lambda), wl = -Gl / (Hl + cfg.lambda), wr = -Gr / (Hr + cfg.lambda);
    auto obj = [&](const std::vector<RowIndex>& rows, TaskId t, double w) {
      double total = 0, nt = 0;
      for (auto r : rows) {
        if (fx.ds.task(r) != t) continue;
        total += fx.grads.g[r] * w + 0.5 * fx.grads.h[r] * w * w;
        nt += 1;
      }
      return total + 0.5 * cfg.lambda * nt / static_cast<double>(rows.size()) * w * w;
    };
    double negative_rows = 0;
    for (TaskId t = 0; t < 4; ++t) {
      const auto nt = std::count_if(at[i].begin(), at[i].end(), [&](RowIndex r) { return fx.ds.task(r) == t; });
      if (nt == 0) continue;
      const double gain = obj(at[i], t, wp) - obj(l, t, wl) - obj(rr, t, wr) -
                          cfg.gamma * static_cast<double>(nt) / static_cast<double>(at[i].size());
      EXPECT_EQ(nd.left_tasks.contains(t), gain < 0) << "node " << i << " task " << t << " gain " << gain;
      if (gain < 0) negative_rows += static_cast<double>(nt);
    }
    EXPECT_NEAR(nd.r_neg, negative_rows / static_cast<double>(at[i].size()), 1e-12);
    EXPECT_GT(nd.r_neg, cfg.R);
    // children partition by task membership
    const auto& left = at[static_cast<std::size_t>(nd.left)];
    const auto& right = at[static_cast<std::size_t>(nd.right)];
    EXPECT_EQ(left.size() + right.size(), at[i].size());
    for (RowIndex r : left) EXPECT_TRUE(nd.left_tasks.contains(fx.ds.task(r)));
    for (RowIndex r : right) EXPECT_FALSE(nd.left_tasks.contains(fx.ds.task(r)));
  }
}

TEST(GrowTree, TaskSplitsConsumeDepth) {
  const Fixture fx(conflict_data(4, 400, 4));
  TrainConfig cfg;
  cfg.R = 0.0;
  cfg.max_depth = 3;
  cfg.min_child_weight = 0.1;
  const auto grown = fx.grow(cfg, TrainMode::kTsgb);
  for (const auto& nd : grown.tree.nodes) EXPECT_LE(nd.depth, 3);
  EXPECT_LE(grown.tree.nodes.size(), 15u);
}

TEST(GrowTree, ChildRowCountsPartitionParent) {
  const Fixture fx(conflict_data(3, 300, 5));
  TrainConfig cfg;
  cfg.min_child_weight = 0.5;
  const auto grown = fx.grow(cfg, TrainMode::kTsgb);
  const auto& nodes = grown.tree.nodes;
  for (const auto& nd : nodes) {
    if (nd.is_leaf()) continue;
    EXPECT_EQ(nd.left_rows + nd.right_rows, nd.n_rows);
    EXPECT_EQ(nodes[static_cast<std::size_t>(nd.left)].n_rows, nd.left_rows);
    EXPECT_EQ(nodes[static_cast<std::size_t>(nd.right)].n_rows, nd.right_rows);
  }
  EXPECT_NO_THROW(grown.tree.validate(fx.ds.n_features()));
}

TEST(GrowTree, DiagnosticsCoverEveryCandidateNode) {
  const Fixture fx(conflict_data(3, 300, 6));
  TrainConfig cfg;
  cfg.min_child_weight = 0.5;
  const auto grown = fx.grow(cfg, TrainMode::kTsgb);
  std::size_t internal = grown.tree.count(NodeKind::kFeature) + grown.tree.count(NodeKind::kTask);
  std::size_t split_diags = 0;
  for (const auto& d : grown.diagnostics) {
    const auto& nd = grown.tree.nodes[static_cast<std::size_t>(d.node)];
    EXPECT_EQ(nd.kind, d.decision);
    EXPECT_DOUBLE_EQ(neg_task_gain_ratio(d.task_gains, d.task_counts), d.r_neg);
    split_diags += d.decision != NodeKind::kLeaf;
  }
  EXPECT_EQ(split_diags, internal);
}

// Property: with one task, TSGB growth equals plain growth node for node.
TEST(GrowTree, SingleTaskMatchesPooled) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Fixture fx(conflict_data(1, 400, seed));
    TrainConfig cfg;
    cfg.R = 0.0;
    cfg.colsample_bylevel = 0.6;
    cfg.seed = seed;
    const auto a = fx.grow(cfg, TrainMode::kTsgb);
    const auto b = fx.grow(cfg, TrainMode::kPooled);
    EXPECT_EQ(a.tree.count(NodeKind::kTask), 0u);
    Model ma, mb;
    ma.trees = {a.tree};
    mb.trees = {b.tree};
    EXPECT_EQ(to_json(ma).dump(), to_json(mb).dump());
  }
}

TEST(GrowTree, LambdaVariantFollowsDraw) {
  const Fixture fx(conflict_data(4, 300, 7));
  TrainConfig cfg;
  cfg.min_child_weight = 0.5;
  cfg.tsgb_lambda = 0.0;
  EXPECT_EQ(fx.grow(cfg, TrainMode::kTsgbLambda).tree.count(NodeKind::kTask), 0u);
  cfg.tsgb_lambda = 1.0;
  const auto always = fx.grow(cfg, TrainMode::kTsgbLambda);
  EXPECT_GT(always.tree.count(NodeKind::kTask), 0u);
  // a task node appears wherever the tasks' gains have both signs
  for (const auto& d : always.diagnostics) {
    if (d.decision == NodeKind::kLeaf) continue;
    bool neg = false, nonneg = false;
    for (std::size_t t = 0; t < d.task_gains.size(); ++t) {
      if (d.task_counts[t] == 0) continue;
      (d.task_gains[t] < 0 ? neg : nonneg) = true;
    }
    EXPECT_EQ(d.decision == NodeKind::kTask, neg && nonneg);
  }
}

Tree feature_stump(double threshold, bool default_left, double wl, double wr) {
  Tree t;
  TreeNode root;
  root.kind = NodeKind::kFeature;
  root.feature = 2;
  root.threshold = threshold;
  root.default_left = default_left;
  root.left = 1;
  root.right = 2;
  TreeNode l, r;
  l.weight = wl;
  r.weight = wr;
  t.nodes = {root, l, r};
  return t;
}

Tree task_stump(std::vector<TaskId> left_tasks, std::uint64_t left_rows, std::uint64_t right_rows) {
  Tree t;
  TreeNode root;
  root.kind = NodeKind::kTask;
  root.left_tasks = TaskSet::of(left_tasks);
  root.left = 1;
  root.right = 2;
  root.left_rows = left_rows;
  root.right_rows = right_rows;
  TreeNode l, r;
  l.weight = -1;
  r.weight = 1;
  t.nodes = {root, l, r};
  return t;
}

TEST(Route, SingleLeaf) {
  Tree t;
  t.nodes.resize(1);
  t.nodes[0].weight = 0.7;
  const std::vector<double> row{1, 2, 3};
  EXPECT_EQ(route(t, DenseRowView(row), 0, 1), 0.7);
  EXPECT_EQ(route(t, DenseRowView(row), 5, 1), 0.7);
}

TEST(Route, BoundaryGoesRight) {
  const Tree t = feature_stump(6.935, true, -1, 1);
  const std::vector<double> at{0, 0, 6.935}, below{0, 0, 6.9349};
  EXPECT_EQ(route(t, DenseRowView(at), 0, 1), 1.0);
  EXPECT_EQ(route(t, DenseRowView(below), 0, 1), -1.0);
}

TEST(Route, MissingFollowsDefault) {
  const std::vector<double> row{0, 0, std::nan("")};
  EXPECT_EQ(route(feature_stump(1, true, -1, 1), DenseRowView(row), 0, 1), -1.0);
  EXPECT_EQ(route(feature_stump(1, false, -1, 1), DenseRowView(row), 0, 1), 1.0);
}

TEST(Route, TaskMembership) {
  const Tree t = task_stump({1, 2}, 10, 5);
  const std::vector<double> row{0};
  EXPECT_EQ(route(t, DenseRowView(row), 1, 4), -1.0);
  EXPECT_EQ(route(t, DenseRowView(row), 3, 4), 1.0);
}

TEST(Route, UnseenTaskPolicies) {
  const std::vector<double> row{0};
  EXPECT_THROW(route(task_stump({0}, 10, 5), DenseRowView(row), 7, 2, UnseenTaskPolicy::kStrict), RoutingError);
  EXPECT_EQ(route(task_stump({0}, 10, 5), DenseRowView(row), 7, 2, UnseenTaskPolicy::kMajority), -1.0);
  EXPECT_EQ(route(task_stump({0}, 5, 10), DenseRowView(row), -1, 2, UnseenTaskPolicy::kMajority), 1.0);
}

TEST(TreeValidate, RejectsBrokenStructures) {
  Tree t = feature_stump(1, true, 0, 0);
  EXPECT_NO_THROW(t.validate(3));
  EXPECT_THROW(t.validate(2), ModelError);
  Tree cyc = t;
  cyc.nodes[0].right = 0;
  EXPECT_THROW(cyc.validate(3), ModelError);
  Tree shared = t;
  shared.nodes[0].right = 1;
  EXPECT_THROW(shared.validate(3), ModelError);
  Tree inf = t;
  inf.nodes[1].weight = INFINITY;
  EXPECT_THROW(inf.validate(3), ModelError);
  Tree empty_task = task_stump({}, 1, 1);
  EXPECT_THROW(empty_task.validate(1), ModelError);
}

TEST(DotExport, SingleLeafIsOneNode) {
  Tree t;
  t.nodes.resize(1);
  t.nodes[0].weight = 0.25;
  const auto dot = to_dot(t);
  EXPECT_NE(dot.find("n0 [label=\"leaf=0.25\""), std::string::npos);
  EXPECT_EQ(dot.find("->"), std::string::npos);
}

TEST(DotExport, LabelsCarrySplitTaskSetAndRneg) {
  Tree t = task_stump({0, 2}, 3, 4);
  t.nodes[0].r_neg = 0.625;
  t.nodes[1].task_counts = {{0, 3, 1}};
  const auto dot = to_dot(t, {"north", "east", "south"});
  EXPECT_NE(dot.find("task in {north,south}"), std::string::npos);
  EXPECT_NE(dot.find("R_neg=0.625"), std::string::npos);
  EXPECT_NE(dot.find("north: 3|1"), std::string::npos);
  Tree f = feature_stump(6.935, false, -1, 1);
  f.nodes[0].r_neg = 0.1;
  const auto fdot = to_dot(f);
  EXPECT_NE(fdot.find("f2 < 6.935\\nR_neg=0.1"), std::string::npos);
  EXPECT_NE(fdot.find("[label=\"no, missing\"]"), std::string::npos);
}

}  // namespace
}  // namespace tsgb
