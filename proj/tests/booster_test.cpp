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

#include "test_util.hpp"
#include "tsgb/booster.hpp"
#include "tsgb/model_io.hpp"
#include "tsgb/synthgen.hpp"

namespace tsgb {
namespace {

Dataset synth(int n_tasks, int rows, double kappa, std::uint64_t seed, double missing = 0.0) {
  SynthSpec s;
  s.n_tasks = n_tasks;
  s.rows_per_task = rows;
  s.n_features = 8;
  s.conflict_rate = kappa;
  s.missing_rate = missing;
  s.seed = seed;
  return generate(s);
}

TrainConfig small_config() {
  TrainConfig c;
  c.n_trees = 15;
  c.max_depth = 3;
  c.min_child_weight = 0.5;
  return c;
}

TEST(Train, ConstantModelPredictsBaseScore) {
  const Dataset ds = testing::make_dataset({{1}, {2}, {3}, {4}}, {0.5, 1.5, 2.0, 4.0}, {0, 0, 1, 1});
  TrainConfig c;
  c.n_trees = 1;
  c.learning_rate = 1.0;
  c.max_depth = 0;
  c.loss = LossKind::kMse;
  const DataSplit split{testing::iota_rows(4), {}, {}, 0};
  const auto res = train(ds, split, c);
  ASSERT_EQ(res.model.trees.size(), 1u);
  EXPECT_DOUBLE_EQ(res.model.base_score, 2.0);
  // the root leaf carries -(sum of residuals)/(4 + lambda) = 0
  for (double p : predict(res.model, ds, testing::iota_rows(4))) EXPECT_DOUBLE_EQ(p, 2.0);
}

TEST(Train, DeterministicForFixedSeed) {
  const Dataset ds = synth(3, 200, 0.5, 1);
  const auto split = split_dataset(ds, {}, 1);
  TrainConfig c = small_config();
  c.subsample = 0.7;
  c.colsample_bytree = 0.6;
  c.colsample_bylevel = 0.8;
  c.seed = 9;
  const auto a = train(ds, split, c);
  const auto b = train(ds, split, c);
  EXPECT_EQ(to_json(a.model).dump(), to_json(b.model).dump());
  c.seed = 10;
  const auto d = train(ds, split, c);
  EXPECT_NE(to_json(a.model).dump(), to_json(d.model).dump());
}

TEST(Train, ThreadCountDoesNotChangeModel) {
  const Dataset ds = synth(3, 200, 0.5, 2, 0.1);
  const auto split = split_dataset(ds, {}, 2);
  TrainConfig c = small_config();
  const auto a = train(ds, split, c);
  c.n_threads = 3;
  const auto b = train(ds, split, c);
  EXPECT_EQ(to_json(a.model).dump(), to_json(b.model).dump());
}

TEST(Predict, EmptyForestIsSigmoidOfBase) {
  Model m;
  m.base_score = 0.3;
  m.n_features = 1;
  m.task_names = {"a"};
  const Dataset ds = testing::make_dataset({{1}}, {0}, {0});
  EXPECT_DOUBLE_EQ(predict(m, ds, testing::iota_rows(1))[0], sigmoid(0.3));
  Tree leaf;
  leaf.nodes.resize(1);
  leaf.nodes[0].weight = -0.8;
  m.trees.push_back(leaf);
  EXPECT_DOUBLE_EQ(predict(m, ds, testing::iota_rows(1))[0], sigmoid(0.3 + -0.8));
}

TEST(Predict, OutputsAreProbabilities) {
  const Dataset ds = synth(2, 200, 0.5, 3);
  const auto split = split_dataset(ds, {}, 3);
  const auto res = train(ds, split, small_config());
  for (double p : predict(res.model, ds, split.test)) {
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

// Property: margins are the running sum over trees, exactly.
TEST(Predict, AdditiveOverTrees) {
  const Dataset ds = synth(3, 150, 0.5, 4, 0.1);
  const auto split = split_dataset(ds, {}, 4);
  const auto res = train(ds, split, small_config());
  const Model& m = res.model;
  for (RowIndex r = 0; r < ds.n_rows(); r += 7) {
    const auto row = ds.row_view(r);
    for (std::size_t k = 1; k <= m.trees.size(); ++k) {
      EXPECT_EQ(m.margin(row, ds.task(r), k),
                m.margin(row, ds.task(r), k - 1) + route(m.trees[k - 1], row, ds.task(r), m.n_tasks()));
    }
  }
}

double regularized_objective(const Model& m, const Dataset& ds, const std::vector<RowIndex>& rows, std::size_t k,
                             LossKind loss, double lambda) {
  double total = 0;
  for (RowIndex r : rows) total += loss_value(m.margin(ds.row_view(r), ds.task(r), k), ds.label(r), loss);
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto& nd : m.trees[i].nodes) {
      if (nd.is_leaf()) total += 0.5 * lambda * nd.weight * nd.weight;
    }
  }
  return total;
}

// Property: without sampling and gamma, each tree lowers the regularised
// training objective.
TEST(Train, ObjectiveNonIncreasing) {
  for (LossKind loss : {LossKind::kLogloss, LossKind::kMse}) {
    const Dataset ds = synth(3, 200, 0.5, 5);
    const auto split = split_dataset(ds, {}, 5);
    TrainConfig c = small_config();
    c.loss = loss;
    c.gamma = 0.0;
    c.learning_rate = loss == LossKind::kMse ? 1.0 : 0.3;
    const auto res = train(ds, split, c);
    double prev = regularized_objective(res.model, ds, split.train, 0, loss, c.lambda);
    for (std::size_t k = 1; k <= res.model.trees.size(); ++k) {
      const double cur = regularized_objective(res.model, ds, split.train, k, loss, c.lambda);
      EXPECT_LE(cur, prev + 1e-9) << loss_name(loss) << " tree " << k;
      prev = cur;
    }
  }
}

// Property: pooled mode ignores task ids apart from bookkeeping.
TEST(Train, PooledEqualsSingleTaskTreatment) {
  const Dataset ds = synth(3, 200, 0.5, 6, 0.1);
  std::vector<std::vector<Entry>> rows;
  for (RowIndex r = 0; r < ds.n_rows(); ++r) rows.emplace_back(ds.row(r).begin(), ds.row(r).end());
  const Dataset merged(std::move(rows), std::vector<double>(ds.labels().begin(), ds.labels().end()),
                       std::vector<TaskId>(ds.n_rows(), 0), ds.n_features(), {"all"});
  const auto split = split_dataset(ds, {}, 6);
  TrainConfig c = small_config();
  c.mode = TrainMode::kPooled;
  c.R = 1.0;
  c.subsample = 0.8;
  const auto a = train(ds, split, c);
  const auto b = train(merged, split, c);
  ASSERT_EQ(a.model.trees.size(), b.model.trees.size());
  for (std::size_t k = 0; k < a.model.trees.size(); ++k) {
    const auto& ta = a.model.trees[k].nodes;
    const auto& tb = b.model.trees[k].nodes;
    ASSERT_EQ(ta.size(), tb.size());
    for (std::size_t i = 0; i < ta.size(); ++i) {
      EXPECT_EQ(ta[i].kind, tb[i].kind);
      EXPECT_EQ(ta[i].feature, tb[i].feature);
      EXPECT_EQ(ta[i].threshold, tb[i].threshold);
      EXPECT_EQ(ta[i].weight, tb[i].weight);
      EXPECT_EQ(ta[i].gain, tb[i].gain);
    }
  }
  const auto all = all_rows(ds);
  EXPECT_EQ(predict_margins(a.model, ds, all), predict_margins(b.model, merged, all));
}

TEST(Train, EarlyStoppingTruncatesToBestIteration) {
  const Dataset ds = synth(2, 150, 0.5, 7);
  const auto split = split_dataset(ds, {}, 7);
  TrainConfig c = small_config();
  c.n_trees = 200;
  c.max_depth = 6;
  c.learning_rate = 1.0;
  c.early_stopping_rounds = 5;
  const auto res = train(ds, split, c);
  const auto& metric = res.report.valid_metric;
  ASSERT_FALSE(metric.empty());
  EXPECT_LT(metric.size(), 200u);
  const auto best = static_cast<std::size_t>(res.report.best_iteration);
  EXPECT_EQ(res.model.trees.size(), best + 1);
  EXPECT_EQ(metric.size(), best + 1 + 5);
  for (std::size_t i = 0; i < metric.size(); ++i) EXPECT_LE(metric[i], metric[best]);
  for (const auto& d : res.report.diagnostics) EXPECT_LE(d.tree, static_cast<int>(best));
}

TEST(Train, EarlyStoppingNeedsValidation) {
  const Dataset ds = synth(2, 50, 0.5, 8);
  TrainConfig c = small_config();
  c.early_stopping_rounds = 3;
  const DataSplit split{all_rows(ds), {}, {}, 0};
  EXPECT_THROW(train(ds, split, c), ConfigError);
}

TEST(Train, RejectsSingleTaskModeAndBadConfig) {
  const Dataset ds = synth(2, 50, 0.5, 8);
  const auto split = split_dataset(ds, {}, 8);
  TrainConfig c = small_config();
  c.mode = TrainMode::kSingleTask;
  EXPECT_THROW(train(ds, split, c), ConfigError);
  c = small_config();
  c.learning_rate = 0.0;
  EXPECT_THROW(train(ds, split, c), ConfigError);
  c = small_config();
  c.R = 1.5;
  EXPECT_THROW(train(ds, split, c), ConfigError);
}

TEST(Train, TaskSplitsStartAtConfiguredTree) {
  const Dataset ds = synth(4, 300, 0.5, 9);
  const auto split = split_dataset(ds, {}, 9);
  TrainConfig c = small_config();
  c.R = 0.2;
  c.tsgb_start_tree = 4;
  const auto res = train(ds, split, c);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(res.model.trees[k].count(NodeKind::kTask), 0u) << k;
  std::size_t later = 0;
  for (std::size_t k = 3; k < res.model.trees.size(); ++k) later += res.model.trees[k].count(NodeKind::kTask);
  EXPECT_GT(later, 0u);
}

TEST(Train, ReportCountsNodes) {
  const Dataset ds = synth(3, 200, 0.5, 10);
  const auto split = split_dataset(ds, {}, 10);
  const auto res = train(ds, split, small_config());
  std::size_t leaves = 0;
  for (const auto& t : res.model.trees) leaves += t.n_leaves();
  EXPECT_EQ(res.report.n_leaves, leaves);
  EXPECT_EQ(res.report.n_trees, res.model.trees.size());
  EXPECT_EQ(res.report.valid_metric.size(), res.model.trees.size());
}

TEST(Predict, FeatureCountMismatchIsModelError) {
  const Dataset ds = synth(2, 60, 0.5, 11);
  const auto res = train(ds, split_dataset(ds, {}, 11), small_config());
  const Dataset other = testing::make_dataset({{1, 2}}, {0}, {0});
  EXPECT_THROW(predict(res.model, other, testing::iota_rows(1)), ModelError);
}

TEST(Predict, UnseenTaskStrictListsRows) {
  const Dataset ds = synth(2, 60, 0.5, 12);
  TrainConfig c = small_config();
  c.unseen_task_policy = UnseenTaskPolicy::kStrict;
  const auto res = train(ds, split_dataset(ds, {}, 12), c);
  std::vector<std::vector<double>> x(3, std::vector<double>(8, 0.1));
  const Dataset other = testing::make_dataset(x, {0, 1, 0}, {0, 1, 0});  // names task0, task1
  try {
    predict(res.model, other, testing::iota_rows(3));
    FAIL() << "expected RoutingError";
  } catch (const RoutingError& e) {
    EXPECT_NE(std::string(e.what()).find("0,1,2"), std::string::npos) << e.what();
  }
}

TEST(Predict, TasksMatchedByName) {
  const Dataset ds = synth(2, 100, 0.5, 13);
  TrainConfig c = small_config();
  c.R = 0.0;
  const auto res = train(ds, split_dataset(ds, {}, 13), c);
  ASSERT_GT(res.report.n_task_nodes, 0u);
  // the same rows listed with the task order reversed
  std::vector<std::vector<Entry>> rows;
  std::vector<TaskId> task;
  for (RowIndex r = 0; r < ds.n_rows(); ++r) {
    rows.emplace_back(ds.row(r).begin(), ds.row(r).end());
    task.push_back(1 - ds.task(r));
  }
  const Dataset flipped(std::move(rows), std::vector<double>(ds.labels().begin(), ds.labels().end()), task,
                        ds.n_features(), {"t1", "t0"});
  const auto all = all_rows(ds);
  EXPECT_EQ(predict(res.model, ds, all), predict(res.model, flipped, all));
}

}  // namespace
}  // namespace tsgb
