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

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tsgb/booster.hpp"

namespace tsgb {

/// One independent forest per task (ST-GB). Each member model knows only its
/// own task.
struct PerTaskModel {
  std::vector<std::string> task_names;
  std::vector<Model> models;
  /// Training rows per task; picks the fallback model for unseen tasks.
  std::vector<std::size_t> train_rows;
};

/// Task-common forest plus one task-specific forest per task (MT-B). The margin
/// for task t is the common margin with the specific trees added on top.
struct MtbModel {
  Model common;
  std::vector<std::string> task_names;
  std::vector<Model> specific;
};

using AnyModel = std::variant<Model, PerTaskModel, MtbModel>;

struct BaselineResult {
  AnyModel model;
  /// One report per trained forest: [common, specific...] for MT-B, one per
  /// task for ST-GB, a single entry otherwise.
  std::vector<TrainReport> reports;
};

namespace detail {

inline std::vector<RowIndex> rows_of_task(const Dataset& ds, std::span<const RowIndex> rows, TaskId t) {
  std::vector<RowIndex> out;
  for (RowIndex r : rows) {
    if (ds.task(r) == t) out.push_back(r);
  }
  return out;
}

/// Positions of the subset rows in the local (subset) index space.
inline std::vector<RowIndex> local_range(std::size_t begin, std::size_t end) {
  std::vector<RowIndex> out(end - begin);
  std::iota(out.begin(), out.end(), static_cast<RowIndex>(begin));
  return out;
}

}  // namespace detail

/// Trains one pooled forest per task on that task's rows alone.
inline BaselineResult train_st_gb(const Dataset& ds, const DataSplit& split, const TrainConfig& cfg) {
  TrainConfig task_cfg = cfg;
  task_cfg.mode = TrainMode::kPooled;
  PerTaskModel out;
  BaselineResult result;
  for (TaskId t = 0; t < static_cast<TaskId>(ds.n_tasks()); ++t) {
    const auto tr = detail::rows_of_task(ds, split.train, t);
    const auto va = detail::rows_of_task(ds, split.valid, t);
    out.task_names.push_back(ds.task_names()[static_cast<std::size_t>(t)]);
    out.train_rows.push_back(tr.size());
    if (tr.empty()) {
      warn("task '" + out.task_names.back() + "' has no training rows; its model is empty");
      Model empty;
      empty.loss = cfg.loss;
      empty.n_features = ds.n_features();
      empty.task_names = {out.task_names.back()};
      empty.feature_names = ds.feature_names();
      empty.config = task_cfg;
      out.models.push_back(std::move(empty));
      result.reports.emplace_back();
      continue;
    }
    std::vector<RowIndex> rows = tr;
    rows.insert(rows.end(), va.begin(), va.end());
    const Dataset local = ds.subset(rows, /*keep_tasks=*/false);
    const auto local_train = detail::local_range(0, tr.size());
    const auto local_valid = detail::local_range(tr.size(), rows.size());
    TrainConfig c = task_cfg;
    if (c.early_stopping_rounds > 0 && local_valid.empty()) {
      warn("task '" + out.task_names.back() + "' has no validation rows; early stopping disabled for it");
      c.early_stopping_rounds = 0;
    }
    auto res = train_rows(local, local_train, local_valid, c);
    out.models.push_back(std::move(res.model));
    result.reports.push_back(std::move(res.report));
  }
  result.model = std::move(out);
  return result;
}

/// MT-B. F_0 is a pooled forest over all tasks; each F_t continues boosting
/// from F_0's margins on task t's rows (or from scratch with
/// `cfg_specific.mtb_independent`). `specific_trees` = 0 leaves every F_t
/// empty.
inline BaselineResult train_mtb(const Dataset& ds, const DataSplit& split, const TrainConfig& cfg_common,
                                const TrainConfig& cfg_specific, int specific_trees) {
  if (specific_trees < 0) throw ConfigError("specific tree count must be >= 0");
  TrainConfig common_cfg = cfg_common;
  common_cfg.mode = TrainMode::kPooled;
  common_cfg.R = 1.0;
  BaselineResult result;
  MtbModel out;
  auto common = train_rows(ds, split.train, split.valid, common_cfg);
  out.common = std::move(common.model);
  out.task_names = ds.task_names();
  result.reports.push_back(std::move(common.report));

  const auto everything = all_rows(ds);
  const auto init = predict_margins(out.common, ds, everything);
  TrainConfig spec_cfg = cfg_specific;
  spec_cfg.mode = TrainMode::kPooled;
  spec_cfg.n_trees = std::max(1, specific_trees);

  for (TaskId t = 0; t < static_cast<TaskId>(ds.n_tasks()); ++t) {
    const auto tr = detail::rows_of_task(ds, split.train, t);
    const auto va = detail::rows_of_task(ds, split.valid, t);
    Model empty;
    empty.loss = spec_cfg.loss;
    empty.n_features = ds.n_features();
    empty.task_names = ds.task_names();
    empty.feature_names = ds.feature_names();
    empty.config = spec_cfg;
    if (specific_trees == 0 || tr.empty()) {
      if (specific_trees > 0) warn("task '" + ds.task_names()[static_cast<std::size_t>(t)] + "' has no training rows");
      out.specific.push_back(std::move(empty));
      result.reports.emplace_back();
      continue;
    }
    TrainConfig c = spec_cfg;
    if (c.early_stopping_rounds > 0 && va.empty()) c.early_stopping_rounds = 0;
    BoostStart start;
    start.first_iteration = common_cfg.n_trees;
    if (!spec_cfg.mtb_independent) start.margins = init;
    auto res = train_rows(ds, tr, va, c, start);
    out.specific.push_back(std::move(res.model));
    result.reports.push_back(std::move(res.report));
  }
  result.model = std::move(out);
  return result;
}

/// Dispatches on cfg.mode: single_task trains ST-GB, every other mode one
/// forest.
inline BaselineResult train_any(const Dataset& ds, const DataSplit& split, const TrainConfig& cfg) {
  if (cfg.mode == TrainMode::kSingleTask) return train_st_gb(ds, split, cfg);
  auto res = train(ds, split, cfg);
  BaselineResult out;
  out.model = std::move(res.model);
  out.reports.push_back(std::move(res.report));
  return out;
}

namespace detail {

inline TaskId model_task(const std::vector<std::string>& names, const std::string& name) {
  for (std::size_t t = 0; t < names.size(); ++t) {
    if (names[t] == name) return static_cast<TaskId>(t);
  }
  return -1;
}

}  // namespace detail

inline std::vector<double> predict_margins(const PerTaskModel& m, const Dataset& ds, std::span<const RowIndex> rows) {
  if (m.models.empty()) throw ModelError("per-task model holds no tasks");
  detail::check_features(m.models.front().n_features, ds);
  const auto ids = map_tasks(m.task_names, ds);
  const auto policy = m.models.front().config.unseen_task_policy;
  detail::check_unseen(ids, ds, rows, policy);
  std::size_t fallback = 0;
  for (std::size_t t = 1; t < m.train_rows.size(); ++t) {
    if (m.train_rows[t] > m.train_rows[fallback]) fallback = t;
  }
  std::vector<double> out;
  out.reserve(rows.size());
  for (RowIndex r : rows) {
    const TaskId id = ids[static_cast<std::size_t>(ds.task(r))];
    const auto& model = m.models[id >= 0 ? static_cast<std::size_t>(id) : fallback];
    out.push_back(model.margin(ds.row_view(r), 0));
  }
  return out;
}

inline std::vector<double> predict_margins(const MtbModel& m, const Dataset& ds, std::span<const RowIndex> rows) {
  detail::check_features(m.common.n_features, ds);
  const auto ids = map_tasks(m.task_names, ds);
  detail::check_unseen(ids, ds, rows, m.common.config.unseen_task_policy);
  std::vector<double> out;
  out.reserve(rows.size());
  for (RowIndex r : rows) {
    const TaskId id = ids[static_cast<std::size_t>(ds.task(r))];
    const auto row = ds.row_view(r);
    double margin = m.common.margin(row, id);
    if (id >= 0) {
      const Model& spec = m.specific[static_cast<std::size_t>(id)];
      // continue the sum tree by tree so the result matches one long forest
      margin += spec.base_score;
      for (const auto& tree : spec.trees) margin += route(tree, row, id, m.task_names.size());
    }
    out.push_back(margin);
  }
  return out;
}

inline std::vector<double> predict_margins(const AnyModel& m, const Dataset& ds, std::span<const RowIndex> rows) {
  return std::visit([&](const auto& x) { return predict_margins(x, ds, rows); }, m);
}

inline LossKind model_loss(const AnyModel& m) {
  struct {
    LossKind operator()(const Model& x) const { return x.loss; }
    LossKind operator()(const PerTaskModel& x) const {
      return x.models.empty() ? LossKind::kLogloss : x.models.front().loss;
    }
    LossKind operator()(const MtbModel& x) const { return x.common.loss; }
  } visitor;
  return std::visit(visitor, m);
}

inline std::vector<double> predict(const AnyModel& m, const Dataset& ds, std::span<const RowIndex> rows) {
  auto out = predict_margins(m, ds, rows);
  if (model_loss(m) == LossKind::kLogloss) {
    for (auto& v : out) v = sigmoid(v);
  }
  return out;
}

}  // namespace tsgb
