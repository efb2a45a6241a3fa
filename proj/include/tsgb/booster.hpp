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
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsgb/config.hpp"
#include "tsgb/data_split.hpp"
#include "tsgb/dataset.hpp"
#include "tsgb/grow.hpp"
#include "tsgb/metrics.hpp"
#include "tsgb/objective.hpp"
#include "tsgb/split_finder.hpp"
#include "tsgb/tree.hpp"

namespace tsgb {

/// Additive forest: margin = base_score + sum of routed leaf weights.
struct Model {
  std::vector<Tree> trees;
  double base_score = 0.0;
  LossKind loss = LossKind::kLogloss;
  std::size_t n_features = 0;
  std::vector<std::string> task_names;  // dense model task id -> original label
  std::vector<std::string> feature_names;
  TrainConfig config;

  std::size_t n_tasks() const { return task_names.size(); }

  /// Model task id for an original task label, -1 if unseen.
  TaskId task_id(const std::string& name) const {
    for (std::size_t t = 0; t < task_names.size(); ++t) {
      if (task_names[t] == name) return static_cast<TaskId>(t);
    }
    return -1;
  }

  /// Margin using the first `n_trees` trees (all by default).
  template <typename RowAccessor>
  double margin(const RowAccessor& row, TaskId task, std::size_t n_trees = SIZE_MAX) const {
    double m = base_score;
    const std::size_t k = std::min(n_trees, trees.size());
    for (std::size_t i = 0; i < k; ++i) m += route(trees[i], row, task, n_tasks(), config.unseen_task_policy);
    return m;
  }

  double transform(double margin_value) const {
    return loss == LossKind::kLogloss ? sigmoid(margin_value) : margin_value;
  }
};

/// Maps each dataset task to the model's task id by name (-1 if unseen).
inline std::vector<TaskId> map_tasks(const std::vector<std::string>& model_tasks, const Dataset& ds) {
  std::vector<TaskId> out(ds.n_tasks(), -1);
  for (std::size_t t = 0; t < ds.n_tasks(); ++t) {
    for (std::size_t m = 0; m < model_tasks.size(); ++m) {
      if (model_tasks[m] == ds.task_names()[t]) out[t] = static_cast<TaskId>(m);
    }
  }
  return out;
}

namespace detail {

inline void check_features(std::size_t model_features, const Dataset& ds) {
  if (ds.n_features() != model_features) {
    throw ModelError("feature count mismatch: model has " + std::to_string(model_features) + ", data has " +
                     std::to_string(ds.n_features()));
  }
}

inline void check_unseen(const std::vector<TaskId>& ids, const Dataset& ds, std::span<const RowIndex> rows,
                         UnseenTaskPolicy policy) {
  if (policy != UnseenTaskPolicy::kStrict) return;
  std::string bad;
  std::size_t n_bad = 0;
  for (RowIndex r : rows) {
    if (ids[static_cast<std::size_t>(ds.task(r))] >= 0) continue;
    if (n_bad++ < 20) bad += (bad.empty() ? "" : ",") + std::to_string(r);
  }
  if (n_bad > 0) {
    throw RoutingError("unseen task ids on " + std::to_string(n_bad) + " rows: " + bad + (n_bad > 20 ? ",..." : ""));
  }
}

}  // namespace detail

inline std::vector<double> predict_margins(const Model& model, const Dataset& ds, std::span<const RowIndex> rows) {
  detail::check_features(model.n_features, ds);
  const auto ids = map_tasks(model.task_names, ds);
  detail::check_unseen(ids, ds, rows, model.config.unseen_task_policy);
  std::vector<double> out;
  out.reserve(rows.size());
  for (RowIndex r : rows) out.push_back(model.margin(ds.row_view(r), ids[static_cast<std::size_t>(ds.task(r))]));
  return out;
}

/// Probabilities for logloss models, raw values for MSE.
inline std::vector<double> predict(const Model& model, const Dataset& ds, std::span<const RowIndex> rows) {
  auto out = predict_margins(model, ds, rows);
  for (auto& v : out) v = model.transform(v);
  return out;
}

inline std::vector<RowIndex> all_rows(const Dataset& ds) {
  std::vector<RowIndex> rows(ds.n_rows());
  std::iota(rows.begin(), rows.end(), RowIndex{0});
  return rows;
}

struct TrainReport {
  /// Mean per-task validation AUC after each tree (empty without a validation split).
  std::vector<double> valid_metric;
  int best_iteration = -1;
  std::size_t n_trees = 0;
  std::size_t n_feature_nodes = 0;
  std::size_t n_task_nodes = 0;
  std::size_t n_leaves = 0;
  std::vector<NodeDiagnostics> diagnostics;
};

struct TrainResult {
  Model model;
  TrainReport report;
};

/// Knobs for continuing boosting from an existing forest (used by MT-B).
struct BoostStart {
  /// Initial margin per dataset row; when set, the base score is 0.
  std::optional<std::vector<double>> margins;
  /// Global index of the first tree, for the per-tree random streams and
  /// tsgb_start_tree.
  int first_iteration = 0;
};

/// Boosts cfg.n_trees trees on `train_rows`, monitoring mean per-task AUC on
/// `valid_rows`. Handles pooled, tsgb and tsgb_lambda modes.
inline TrainResult train_rows(const Dataset& ds, std::span<const RowIndex> train_rows,
                              std::span<const RowIndex> valid_rows, const TrainConfig& cfg,
                              const BoostStart& start = {}) {
  cfg.validate();
  if (cfg.mode == TrainMode::kSingleTask) {
    throw ConfigError("single_task mode trains one model per task; use train_st_gb");
  }
  if (cfg.early_stopping_rounds > 0 && valid_rows.empty()) {
    throw ConfigError("early stopping needs a nonempty validation split");
  }
  if (train_rows.empty()) throw ConfigError("training split is empty");
  if (cfg.loss == LossKind::kLogloss) ds.require_binary_labels();

  TrainResult result;
  Model& model = result.model;
  TrainReport& report = result.report;
  model.loss = cfg.loss;
  model.n_features = ds.n_features();
  model.task_names = ds.task_names();
  model.feature_names = ds.feature_names();
  model.config = cfg;

  std::vector<double> margins(ds.n_rows(), 0.0);
  if (start.margins) {
    if (start.margins->size() != ds.n_rows()) throw ConfigError("initial margins must cover every row");
    margins = *start.margins;
    model.base_score = 0.0;
  } else {
    std::vector<double> y;
    y.reserve(train_rows.size());
    for (RowIndex r : train_rows) y.push_back(ds.label(r));
    model.base_score = base_score(y, cfg.loss);
    std::fill(margins.begin(), margins.end(), model.base_score);
  }

  const ColumnIndex columns(ds);
  std::vector<FeatureIndex> all_features(ds.n_features());
  std::iota(all_features.begin(), all_features.end(), FeatureIndex{0});
  std::vector<double> valid_scores(valid_rows.size());
  GradStats grads;
  double best_metric = -1.0;

  for (int s = 0; s < cfg.n_trees; ++s) {
    const int it = start.first_iteration + s;
    grad_hess_into(margins, ds.labels(), cfg.loss, grads);
    Rng rng = Rng::derive(cfg.seed, static_cast<std::uint64_t>(it));

    std::vector<RowIndex> sample;
    if (cfg.subsample < 1.0) {
      for (RowIndex r : train_rows) {
        if (rng.bernoulli(cfg.subsample)) sample.push_back(r);
      }
      if (sample.empty()) sample.assign(train_rows.begin(), train_rows.end());
    } else {
      sample.assign(train_rows.begin(), train_rows.end());
    }
    const auto tree_features = detail::sample_features(all_features, cfg.colsample_bytree, rng);

    GrowContext ctx;
    ctx.tree_index = it;
    ctx.mode = (cfg.mode == TrainMode::kPooled || it + 1 < cfg.tsgb_start_tree) ? TrainMode::kPooled : cfg.mode;
    GrownTree grown = grow_tree(ds, columns, grads, std::move(sample), tree_features, cfg, ctx, rng);

    const Tree& tree = grown.tree;
    for (RowIndex r : train_rows) margins[r] += route(tree, ds.row_view(r), ds.task(r), ds.n_tasks());
    for (std::size_t i = 0; i < valid_rows.size(); ++i) {
      const RowIndex r = valid_rows[i];
      margins[r] += route(tree, ds.row_view(r), ds.task(r), ds.n_tasks());
      valid_scores[i] = margins[r];
    }
    report.diagnostics.insert(report.diagnostics.end(), std::make_move_iterator(grown.diagnostics.begin()),
                              std::make_move_iterator(grown.diagnostics.end()));
    model.trees.push_back(std::move(grown.tree));

    if (!valid_rows.empty()) {
      const double metric = mean_task_auc(ds, valid_rows, valid_scores);
      report.valid_metric.push_back(metric);
      // NaN (no task with both classes) never becomes the best iteration
      if (metric > best_metric) {
        best_metric = metric;
        report.best_iteration = s;
      }
      if (cfg.early_stopping_rounds > 0 && report.best_iteration >= 0 &&
          s - report.best_iteration >= cfg.early_stopping_rounds) {
        break;
      }
    }
  }

  if (cfg.early_stopping_rounds > 0 && report.best_iteration >= 0) {
    const auto keep = static_cast<std::size_t>(report.best_iteration + 1);
    model.trees.resize(keep);
    // trees past the best one no longer exist; neither do their diagnostics
    std::erase_if(report.diagnostics,
                  [&](const NodeDiagnostics& d) { return d.tree >= start.first_iteration + static_cast<int>(keep); });
  }
  report.n_trees = model.trees.size();
  for (const auto& t : model.trees) {
    report.n_feature_nodes += t.count(NodeKind::kFeature);
    report.n_task_nodes += t.count(NodeKind::kTask);
    report.n_leaves += t.count(NodeKind::kLeaf);
  }
  return result;
}

inline TrainResult train(const Dataset& ds, const DataSplit& split, const TrainConfig& cfg) {
  return train_rows(ds, split.train, split.valid, cfg);
}

}  // namespace tsgb
