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

#include <cstdint>
#include <string>

#include <json.hpp>

#include "tsgb/common.hpp"
#include "tsgb/objective.hpp"

namespace tsgb {

enum class TrainMode {
  kPooled,      // plain GBDT over all tasks, never splits task-wise
  kTsgb,        // task-wise split when R_neg > R
  kTsgbLambda,  // task-wise split on a Bernoulli(tsgb_lambda) draw per node
  kSingleTask,  // one independent pooled model per task
};

enum class UnseenTaskPolicy { kMajority, kStrict };

inline TrainMode parse_mode(const std::string& s) {
  if (s == "pooled") return TrainMode::kPooled;
  if (s == "tsgb") return TrainMode::kTsgb;
  if (s == "tsgb_lambda") return TrainMode::kTsgbLambda;
  if (s == "single_task") return TrainMode::kSingleTask;
  throw ConfigError("unknown mode '" + s + "' (expected pooled | tsgb | tsgb_lambda | single_task)");
}

inline std::string mode_name(TrainMode m) {
  switch (m) {
    case TrainMode::kPooled: return "pooled";
    case TrainMode::kTsgb: return "tsgb";
    case TrainMode::kTsgbLambda: return "tsgb_lambda";
    case TrainMode::kSingleTask: return "single_task";
  }
  return "?";
}

inline UnseenTaskPolicy parse_policy(const std::string& s) {
  if (s == "majority") return UnseenTaskPolicy::kMajority;
  if (s == "strict") return UnseenTaskPolicy::kStrict;
  throw ConfigError("unknown unseen_task_policy '" + s + "' (expected majority | strict)");
}

inline std::string policy_name(UnseenTaskPolicy p) {
  return p == UnseenTaskPolicy::kMajority ? "majority" : "strict";
}

/// Booster hyperparameters. Names follow the usual xgboost spellings;
/// `R` is the negative-task-gain threshold (max_neg_sample_ratio).
struct TrainConfig {
  int n_trees = 100;
  int max_depth = 6;
  double learning_rate = 0.3;
  double lambda = 1.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double min_child_weight = 1.0;
  double subsample = 1.0;
  double colsample_bytree = 1.0;
  double colsample_bylevel = 1.0;
  double R = 0.4;
  double tsgb_lambda = 0.0;
  TrainMode mode = TrainMode::kTsgb;
  std::uint64_t seed = 0;
  int early_stopping_rounds = 0;
  /// 1-based index of the first tree grown with task-wise splits enabled;
  /// earlier trees are grown pooled.
  int tsgb_start_tree = 1;
  LossKind loss = LossKind::kLogloss;
  UnseenTaskPolicy unseen_task_policy = UnseenTaskPolicy::kMajority;
  /// MT-B only: train task-specific forests from scratch instead of from the
  /// common forest's margins.
  bool mtb_independent = false;
  /// Worker threads for split search. Not part of the model; results do not
  /// depend on it.
  int n_threads = 1;

  void validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (n_trees < 1) fail("n_trees must be >= 1");
    if (max_depth < 0) fail("max_depth must be >= 0");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) fail("learning_rate must be in (0, 1]");
    if (!(lambda >= 0.0)) fail("lambda must be >= 0");
    if (!(alpha >= 0.0)) fail("alpha must be >= 0");
    if (!(gamma >= 0.0)) fail("gamma must be >= 0");
    if (!(min_child_weight >= 0.0)) fail("min_child_weight must be >= 0");
    if (!(subsample > 0.0 && subsample <= 1.0)) fail("subsample must be in (0, 1]");
    if (!(colsample_bytree > 0.0 && colsample_bytree <= 1.0)) fail("colsample_bytree must be in (0, 1]");
    if (!(colsample_bylevel > 0.0 && colsample_bylevel <= 1.0)) fail("colsample_bylevel must be in (0, 1]");
    if (!(R >= 0.0 && R <= 1.0)) fail("R must be in [0, 1]");
    if (!(tsgb_lambda >= 0.0 && tsgb_lambda <= 1.0)) fail("tsgb_lambda must be in [0, 1]");
    if (early_stopping_rounds < 0) fail("early_stopping_rounds must be >= 0");
    if (tsgb_start_tree < 1) fail("tsgb_start_tree must be >= 1");
    if (n_threads < 1) fail("n_threads must be >= 1");
  }
};

inline nlohmann::json to_json(const TrainConfig& c) {
  return nlohmann::json{
      {"n_trees", c.n_trees},
      {"max_depth", c.max_depth},
      {"learning_rate", c.learning_rate},
      {"lambda", c.lambda},
      {"alpha", c.alpha},
      {"gamma", c.gamma},
      {"min_child_weight", c.min_child_weight},
      {"subsample", c.subsample},
      {"colsample_bytree", c.colsample_bytree},
      {"colsample_bylevel", c.colsample_bylevel},
      {"R", c.R},
      {"tsgb_lambda", c.tsgb_lambda},
      {"mode", mode_name(c.mode)},
      {"seed", c.seed},
      {"early_stopping_rounds", c.early_stopping_rounds},
      {"tsgb_start_tree", c.tsgb_start_tree},
      {"loss", loss_name(c.loss)},
      {"unseen_task_policy", policy_name(c.unseen_task_policy)},
      {"mtb_independent", c.mtb_independent},
  };
}

/// Applies the keys of `j` on top of `c`. Accepts xgboost aliases
/// (eta, reg_lambda, reg_alpha, max_neg_sample_ratio). Unknown keys and
/// wrongly typed values are ConfigErrors.
inline void apply_json(TrainConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const auto& v = it.value();
      if (k == "n_trees" || k == "num_round") c.n_trees = v.get<int>();
      else if (k == "max_depth") c.max_depth = v.get<int>();
      else if (k == "learning_rate" || k == "eta") c.learning_rate = v.get<double>();
      else if (k == "lambda" || k == "reg_lambda") c.lambda = v.get<double>();
      else if (k == "alpha" || k == "reg_alpha") c.alpha = v.get<double>();
      else if (k == "gamma") c.gamma = v.get<double>();
      else if (k == "min_child_weight") c.min_child_weight = v.get<double>();
      else if (k == "subsample") c.subsample = v.get<double>();
      else if (k == "colsample_bytree") c.colsample_bytree = v.get<double>();
      else if (k == "colsample_bylevel") c.colsample_bylevel = v.get<double>();
      else if (k == "R" || k == "max_neg_sample_ratio") c.R = v.get<double>();
      else if (k == "tsgb_lambda") c.tsgb_lambda = v.get<double>();
      else if (k == "mode") c.mode = parse_mode(v.get<std::string>());
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "early_stopping_rounds") c.early_stopping_rounds = v.get<int>();
      else if (k == "tsgb_start_tree") c.tsgb_start_tree = v.get<int>();
      else if (k == "loss" || k == "objective") c.loss = parse_loss(v.get<std::string>());
      else if (k == "unseen_task_policy") c.unseen_task_policy = parse_policy(v.get<std::string>());
      else if (k == "mtb_independent") c.mtb_independent = v.get<bool>();
      else throw ConfigError("unknown config key '" + k + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

inline TrainConfig config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  apply_json(c, j);
  c.validate();
  return c;
}

}  // namespace tsgb
