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
#include <span>
#include <string>
#include <vector>

#include "tsgb/common.hpp"

namespace tsgb {

enum class LossKind { kLogloss, kMse };

inline LossKind parse_loss(const std::string& s) {
  if (s == "logloss") return LossKind::kLogloss;
  if (s == "mse") return LossKind::kMse;
  throw ConfigError("unknown loss '" + s + "' (expected logloss | mse)");
}

inline std::string loss_name(LossKind k) { return k == LossKind::kLogloss ? "logloss" : "mse"; }

inline double sigmoid(double m) {
  if (m >= 0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

/// Per-row first and second order gradients w.r.t. the margin.
struct GradStats {
  std::vector<double> g;
  std::vector<double> h;
  std::size_t size() const { return g.size(); }
};

/// Loss of one row at margin m.
inline double loss_value(double margin, double label, LossKind kind) {
  if (kind == LossKind::kMse) return 0.5 * (margin - label) * (margin - label);
  // log(1 + e^m) - y m, computed stably
  const double softplus = margin > 0 ? margin + std::log1p(std::exp(-margin)) : std::log1p(std::exp(margin));
  return softplus - label * margin;
}

/// Constant initial margin: logit of the mean label (clamped to
/// [1e-6, 1 - 1e-6]) for logloss, the mean label for MSE.
inline double base_score(std::span<const double> labels, LossKind kind) {
  if (labels.empty()) throw ValidationError("base_score needs at least one label");
  double sum = 0;
  for (double y : labels) sum += y;
  const double mean = sum / static_cast<double>(labels.size());
  if (kind == LossKind::kMse) return mean;
  constexpr double lo = 1e-6, hi = 1.0 - 1e-6;
  double p = mean;
  if (p < lo || p > hi) {
    warn("mean label " + std::to_string(mean) + " clamped before logit");
    p = std::clamp(p, lo, hi);
  }
  return std::log(p / (1.0 - p));
}

inline void grad_hess_into(std::span<const double> margins, std::span<const double> labels,
                           LossKind kind, GradStats& out) {
  if (margins.size() != labels.size()) throw ValidationError("margins and labels differ in length");
  out.g.resize(margins.size());
  out.h.resize(margins.size());
  if (kind == LossKind::kMse) {
    for (std::size_t i = 0; i < margins.size(); ++i) {
      out.g[i] = margins[i] - labels[i];
      out.h[i] = 1.0;
    }
    return;
  }
  for (std::size_t i = 0; i < margins.size(); ++i) {
    // p - y written as (1 - y) p - y (1 - p) so neither term cancels when p rounds to 1
    const double p = sigmoid(margins[i]);
    const double q = sigmoid(-margins[i]);
    out.g[i] = (1.0 - labels[i]) * p - labels[i] * q;
    out.h[i] = p * q;
  }
}

inline GradStats grad_hess(std::span<const double> margins, std::span<const double> labels, LossKind kind) {
  GradStats out;
  grad_hess_into(margins, labels, kind, out);
  return out;
}

}  // namespace tsgb
