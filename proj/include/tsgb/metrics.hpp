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
#include <cstdio>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsgb/common.hpp"
#include "tsgb/dataset.hpp"

namespace tsgb {

/// Raised when a metric is undefined for the given labels (single class).
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

/// ROC-AUC in the Mann-Whitney form: P(score_pos > score_neg) with ties
/// counted one half. Uses average ranks, O(n log n).
inline double auc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw ValidationError("auc: scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // ranks i+1..j share their mean; (i + 1 + j) / 2 is a half-integer, exact in double
    const double mean_rank = static_cast<double>(i + 1 + j) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] > 0.5) {
        pos_rank_sum += mean_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw UndefinedMetric("auc undefined: labels contain a single class");
  const double u = pos_rank_sum - static_cast<double>(n_pos) * static_cast<double>(n_pos + 1) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

struct ThresholdedMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Set when nothing was predicted positive (precision reported as 0).
  bool no_predicted_positive = false;
};

/// Confusion-matrix metrics with `score >= threshold` predicted positive.
inline ThresholdedMetrics thresholded_metrics(std::span<const double> scores, std::span<const double> labels,
                                              double threshold) {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= threshold;
    const bool pos = labels[i] > 0.5;
    if (pred && pos) ++tp;
    else if (pred) ++fp;
    else if (pos) ++fn;
    else ++tn;
  }
  ThresholdedMetrics m;
  const auto n = static_cast<double>(scores.size());
  m.accuracy = n > 0 ? static_cast<double>(tp + tn) / n : 0.0;
  m.no_predicted_positive = tp + fp == 0;
  m.precision = m.no_predicted_positive ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  m.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

struct EvalReport {
  std::vector<std::string> task_names;
  /// NaN for tasks excluded because the evaluated rows hold a single class.
  std::vector<double> per_task_auc;
  double avg_auc = 0.0;
  std::optional<ThresholdedMetrics> thresholded;
  double threshold = 0.0;
};

/// Per-task AUC over `rows` and its unweighted mean over tasks with both classes.
inline EvalReport evaluate_scores(const Dataset& ds, std::span<const RowIndex> rows, std::span<const double> scores,
                                  std::optional<double> threshold = std::nullopt) {
  EvalReport rep;
  rep.task_names = ds.task_names();
  std::vector<std::vector<double>> s(ds.n_tasks()), y(ds.n_tasks());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto t = static_cast<std::size_t>(ds.task(rows[i]));
    s[t].push_back(scores[i]);
    y[t].push_back(ds.label(rows[i]));
  }
  double sum = 0.0;
  std::size_t used = 0;
  rep.per_task_auc.assign(ds.n_tasks(), std::nan(""));
  for (std::size_t t = 0; t < ds.n_tasks(); ++t) {
    if (s[t].empty()) {
      warn("task '" + ds.task_names()[t] + "' has no evaluation rows; excluded from AVG");
      continue;
    }
    try {
      rep.per_task_auc[t] = auc(s[t], y[t]);
      sum += rep.per_task_auc[t];
      ++used;
    } catch (const UndefinedMetric&) {
      warn("task '" + ds.task_names()[t] + "' has a single class in evaluation rows; excluded from AVG");
    }
  }
  rep.avg_auc = used ? sum / static_cast<double>(used) : std::nan("");
  if (threshold) {
    std::vector<double> labels;
    labels.reserve(rows.size());
    for (RowIndex r : rows) labels.push_back(ds.label(r));
    rep.thresholded = thresholded_metrics(scores, labels, *threshold);
    rep.threshold = *threshold;
  }
  return rep;
}

/// Mean per-task AUC without warnings; tasks lacking a class are skipped.
inline double mean_task_auc(const Dataset& ds, std::span<const RowIndex> rows, std::span<const double> scores) {
  std::vector<std::vector<double>> s(ds.n_tasks()), y(ds.n_tasks());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto t = static_cast<std::size_t>(ds.task(rows[i]));
    s[t].push_back(scores[i]);
    y[t].push_back(ds.label(rows[i]));
  }
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t t = 0; t < s.size(); ++t) {
    try {
      if (s[t].empty()) continue;
      sum += auc(s[t], y[t]);
      ++used;
    } catch (const UndefinedMetric&) {
    }
  }
  return used ? sum / static_cast<double>(used) : std::nan("");
}

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json tasks = nlohmann::json::array();
  for (std::size_t t = 0; t < r.per_task_auc.size(); ++t) {
    nlohmann::json auc_value = std::isnan(r.per_task_auc[t]) ? nlohmann::json(nullptr) : nlohmann::json(r.per_task_auc[t]);
    tasks.push_back({{"task", r.task_names[t]}, {"auc", auc_value}});
  }
  nlohmann::json j{{"per_task", tasks},
                   {"avg_auc", std::isnan(r.avg_auc) ? nlohmann::json(nullptr) : nlohmann::json(r.avg_auc)}};
  if (r.thresholded) {
    const auto& m = *r.thresholded;
    j["threshold"] = r.threshold;
    j["thresholded"] = {{"accuracy", m.accuracy},
                        {"precision", m.precision},
                        {"recall", m.recall},
                        {"f1", m.f1},
                        {"no_predicted_positive", m.no_predicted_positive}};
  }
  return j;
}

/// One row per task, AVG last, AUC in percent with two decimals.
inline std::string format_table(const EvalReport& r, const std::string& column = "AUC") {
  std::size_t width = 4;
  for (const auto& n : r.task_names) width = std::max(width, n.size());
  std::ostringstream out;
  auto row = [&](const std::string& name, double v) {
    char buf[32];
    if (std::isnan(v)) {
      std::snprintf(buf, sizeof buf, "%8s", "n/a");
    } else {
      std::snprintf(buf, sizeof buf, "%8.2f", 100.0 * v);
    }
    out << name << std::string(width - name.size(), ' ') << " |" << buf << '\n';
  };
  out << "Task" << std::string(width - 4, ' ') << " |" << std::string(8 - std::min<std::size_t>(8, column.size()), ' ')
      << column << '\n';
  out << std::string(width, '-') << "-+" << std::string(8, '-') << '\n';
  for (std::size_t t = 0; t < r.per_task_auc.size(); ++t) row(r.task_names[t], r.per_task_auc[t]);
  out << std::string(width, '-') << "-+" << std::string(8, '-') << '\n';
  row("AVG", r.avg_auc);
  if (r.thresholded) {
    const auto& m = *r.thresholded;
    char buf[160];
    std::snprintf(buf, sizeof buf, "threshold %.4g: accuracy %.4f precision %.4f recall %.4f f1 %.4f%s\n", r.threshold,
                  m.accuracy, m.precision, m.recall, m.f1, m.no_predicted_positive ? " (no predicted positives)" : "");
    out << buf;
  }
  return out.str();
}

/// mean and 1.96 * sigma / sqrt(n) with the sample standard deviation.
struct MeanCi {
  double mean = 0.0;
  double ci95 = 0.0;
};

inline MeanCi mean_ci(std::span<const double> xs) {
  MeanCi m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return m;
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  const double sigma = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  m.ci95 = 1.96 * sigma / std::sqrt(static_cast<double>(xs.size()));
  return m;
}

}  // namespace tsgb
