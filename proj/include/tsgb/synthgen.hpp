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
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsgb/common.hpp"
#include "tsgb/dataset.hpp"
#include "tsgb/objective.hpp"
#include "tsgb/random.hpp"

namespace tsgb {

/// Recipe for a synthetic multi-task binary dataset.
///
/// Task t has logit  s_t . w + d_t . x  where s_t flips the sign of a fixed
/// set of round(conflict_rate * n_features) coordinates of the shared weight
/// w for odd t and leaves it alone for even t. Features are i.i.d. N(0, 1).
/// Labels are Bernoulli(sigmoid(logit)), then flipped with probability
/// label_noise. Empty weight vectors are drawn from N(0, scale^2).
struct SynthSpec {
  int n_tasks = 4;
  int rows_per_task = 2000;
  int n_features = 20;
  std::vector<double> shared_weight;            // n_features, or empty
  std::vector<std::vector<double>> divergence;  // n_tasks x n_features, or empty
  double conflict_rate = 0.5;
  double label_noise = 0.0;
  double weight_scale = 0.5;
  double divergence_scale = 0.0;
  /// Fraction of cells removed (made missing) after labels are drawn.
  double missing_rate = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("synth spec: " + m); };
    if (n_tasks < 1 || rows_per_task < 1 || n_features < 1) fail("sizes must be positive");
    if (!shared_weight.empty() && shared_weight.size() != static_cast<std::size_t>(n_features)) {
      fail("shared_weight must have n_features entries");
    }
    if (!divergence.empty()) {
      if (divergence.size() != static_cast<std::size_t>(n_tasks)) fail("divergence must have n_tasks rows");
      for (const auto& d : divergence) {
        if (d.size() != static_cast<std::size_t>(n_features)) fail("divergence rows must have n_features entries");
      }
    }
    if (!(conflict_rate >= 0.0 && conflict_rate <= 1.0)) fail("conflict_rate must be in [0, 1]");
    if (!(label_noise >= 0.0 && label_noise <= 1.0)) fail("label_noise must be in [0, 1]");
    if (!(missing_rate >= 0.0 && missing_rate < 1.0)) fail("missing_rate must be in [0, 1)");
    if (!(weight_scale >= 0.0) || !(divergence_scale >= 0.0)) fail("scales must be >= 0");
  }
};

inline nlohmann::json to_json(const SynthSpec& s) {
  return {{"n_tasks", s.n_tasks},
          {"rows_per_task", s.rows_per_task},
          {"n_features", s.n_features},
          {"shared_weight", s.shared_weight},
          {"divergence", s.divergence},
          {"conflict_rate", s.conflict_rate},
          {"label_noise", s.label_noise},
          {"weight_scale", s.weight_scale},
          {"divergence_scale", s.divergence_scale},
          {"missing_rate", s.missing_rate},
          {"seed", s.seed}};
}

inline SynthSpec synth_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("synth spec must be a JSON object");
  SynthSpec s;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& k = it.key();
      const auto& v = it.value();
      if (k == "n_tasks") s.n_tasks = v.get<int>();
      else if (k == "rows_per_task") s.rows_per_task = v.get<int>();
      else if (k == "n_features") s.n_features = v.get<int>();
      else if (k == "shared_weight") s.shared_weight = v.get<std::vector<double>>();
      else if (k == "divergence") s.divergence = v.get<std::vector<std::vector<double>>>();
      else if (k == "conflict_rate") s.conflict_rate = v.get<double>();
      else if (k == "label_noise") s.label_noise = v.get<double>();
      else if (k == "weight_scale") s.weight_scale = v.get<double>();
      else if (k == "divergence_scale") s.divergence_scale = v.get<double>();
      else if (k == "missing_rate") s.missing_rate = v.get<double>();
      else if (k == "seed") s.seed = v.get<std::uint64_t>();
      else throw ConfigError("synth spec: unknown key '" + k + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synth spec: ") + e.what());
  }
  s.validate();
  return s;
}

/// Effective per-task weight vectors after sign flips and divergence.
inline std::vector<std::vector<double>> synth_task_weights(const SynthSpec& spec) {
  spec.validate();
  const auto m = static_cast<std::size_t>(spec.n_features);
  std::vector<double> w = spec.shared_weight;
  if (w.empty()) {
    Rng rng = Rng::derive(spec.seed, 0);
    for (std::size_t j = 0; j < m; ++j) w.push_back(spec.weight_scale * rng.normal());
  }
  std::vector<std::size_t> coords(m);
  std::iota(coords.begin(), coords.end(), 0);
  Rng flip_rng = Rng::derive(spec.seed, 1);
  flip_rng.shuffle(std::span<std::size_t>(coords));
  const auto n_flip = static_cast<std::size_t>(std::lround(spec.conflict_rate * static_cast<double>(m)));
  std::vector<char> flipped(m, 0);
  for (std::size_t k = 0; k < n_flip; ++k) flipped[coords[k]] = 1;

  Rng div_rng = Rng::derive(spec.seed, 2);
  std::vector<std::vector<double>> out;
  for (int t = 0; t < spec.n_tasks; ++t) {
    std::vector<double> wt(m);
    for (std::size_t j = 0; j < m; ++j) {
      const bool flip = (t % 2 == 1) && flipped[j];
      double d = 0.0;
      if (!spec.divergence.empty()) {
        d = spec.divergence[static_cast<std::size_t>(t)][j];
      } else if (spec.divergence_scale > 0.0) {
        d = spec.divergence_scale * div_rng.normal();
      }
      wt[j] = (flip ? -w[j] : w[j]) + d;
    }
    out.push_back(std::move(wt));
  }
  return out;
}

/// Deterministic in the spec: rows are task-major, task t named "t<t>".
inline Dataset generate(const SynthSpec& spec) {
  const auto weights = synth_task_weights(spec);
  const auto m = static_cast<std::size_t>(spec.n_features);
  std::vector<std::vector<Entry>> rows;
  std::vector<double> labels;
  std::vector<TaskId> tasks;
  std::vector<std::string> names;
  for (int t = 0; t < spec.n_tasks; ++t) {
    names.push_back("t" + std::to_string(t));
    Rng rng = Rng::derive(spec.seed, 16 + static_cast<std::uint64_t>(t));
    const auto& wt = weights[static_cast<std::size_t>(t)];
    for (int i = 0; i < spec.rows_per_task; ++i) {
      std::vector<double> x(m);
      double logit = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        x[j] = rng.normal();
        logit += wt[j] * x[j];
      }
      double y = rng.uniform() < sigmoid(logit) ? 1.0 : 0.0;
      if (rng.uniform() < spec.label_noise) y = 1.0 - y;
      std::vector<Entry> entries;
      entries.reserve(m);
      for (std::size_t j = 0; j < m; ++j) {
        const bool drop = spec.missing_rate > 0.0 && rng.uniform() < spec.missing_rate;
        if (!drop) entries.push_back({static_cast<FeatureIndex>(j), x[j]});
      }
      rows.push_back(std::move(entries));
      labels.push_back(y);
      tasks.push_back(static_cast<TaskId>(t));
    }
  }
  return Dataset(std::move(rows), std::move(labels), std::move(tasks), m, std::move(names));
}

}  // namespace tsgb
