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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tsgb/common.hpp"

namespace tsgb {

/// One present cell of a sparse row.
struct Entry {
  FeatureIndex feature;
  double value;
  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Read access to one sample's features, backed by a sparse row.
class SparseRowView {
 public:
  explicit SparseRowView(std::span<const Entry> entries) : entries_(entries) {}

  std::optional<double> value(FeatureIndex f) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), f,
                               [](const Entry& e, FeatureIndex key) { return e.feature < key; });
    if (it == entries_.end() || it->feature != f) return std::nullopt;
    return it->value;
  }

 private:
  std::span<const Entry> entries_;
};

/// Read access to a dense row where NaN marks a missing cell.
class DenseRowView {
 public:
  explicit DenseRowView(std::span<const double> values) : values_(values) {}

  std::optional<double> value(FeatureIndex f) const {
    if (f < 0 || static_cast<std::size_t>(f) >= values_.size()) return std::nullopt;
    const double v = values_[static_cast<std::size_t>(f)];
    if (std::isnan(v)) return std::nullopt;
    return v;
  }

 private:
  std::span<const double> values_;
};

/// Multi-task tabular data. Rows are stored sparsely (absent cell = missing);
/// tasks are dense ids in [0, n_tasks) with the original labels kept as names.
/// Immutable once constructed.
class Dataset {
 public:
  Dataset() = default;

  /// Takes ownership of per-row sparse entries (sorted by feature, unique).
  /// Throws ValidationError when the task partition is not valid.
  Dataset(std::vector<std::vector<Entry>> rows, std::vector<double> labels,
          std::vector<TaskId> task_of, std::size_t n_features, std::vector<std::string> task_names,
          std::vector<std::string> feature_names = {})
      : labels_(std::move(labels)),
        task_of_(std::move(task_of)),
        n_features_(n_features),
        task_names_(std::move(task_names)),
        feature_names_(std::move(feature_names)) {
    if (rows.size() != labels_.size() || rows.size() != task_of_.size()) {
      throw ValidationError("rows, labels and task ids differ in length");
    }
    row_ptr_.assign(1, 0);
    row_ptr_.reserve(rows.size() + 1);
    for (auto& r : rows) {
      for (std::size_t k = 0; k < r.size(); ++k) {
        if (r[k].feature < 0 || static_cast<std::size_t>(r[k].feature) >= n_features_) {
          throw ValidationError("feature index out of range");
        }
        if (k > 0 && r[k].feature <= r[k - 1].feature) {
          throw ValidationError("row entries must be strictly ascending by feature");
        }
      }
      entries_.insert(entries_.end(), r.begin(), r.end());
      row_ptr_.push_back(entries_.size());
    }
    const std::size_t n_tasks = task_names_.size();
    task_index_.assign(n_tasks, {});
    for (std::size_t i = 0; i < task_of_.size(); ++i) {
      const TaskId t = task_of_[i];
      if (t < 0 || static_cast<std::size_t>(t) >= n_tasks) {
        throw ValidationError("task id " + std::to_string(t) + " out of range at row " +
                              std::to_string(i));
      }
      task_index_[static_cast<std::size_t>(t)].push_back(static_cast<RowIndex>(i));
    }
    for (std::size_t t = 0; t < n_tasks; ++t) {
      if (task_index_[t].empty()) {
        throw ValidationError("task '" + task_names_[t] + "' has no rows");
      }
    }
    if (feature_names_.empty()) {
      for (std::size_t f = 0; f < n_features_; ++f) feature_names_.push_back("f" + std::to_string(f));
    }
  }

  std::size_t n_rows() const { return labels_.size(); }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_tasks() const { return task_index_.size(); }

  std::span<const Entry> row(RowIndex r) const {
    return {entries_.data() + row_ptr_[r], entries_.data() + row_ptr_[r + 1]};
  }
  SparseRowView row_view(RowIndex r) const { return SparseRowView(row(r)); }
  std::optional<double> value(RowIndex r, FeatureIndex f) const { return row_view(r).value(f); }

  double label(RowIndex r) const { return labels_[r]; }
  TaskId task(RowIndex r) const { return task_of_[r]; }
  std::span<const double> labels() const { return labels_; }
  std::span<const TaskId> tasks() const { return task_of_; }

  /// S^t: rows of task t in ascending order.
  std::span<const RowIndex> task_rows(TaskId t) const {
    return task_index_[static_cast<std::size_t>(t)];
  }

  const std::vector<std::string>& task_names() const { return task_names_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  std::size_t nnz() const { return entries_.size(); }

  /// Dense id for an original task label, if known.
  std::optional<TaskId> find_task(const std::string& name) const {
    for (std::size_t t = 0; t < task_names_.size(); ++t) {
      if (task_names_[t] == name) return static_cast<TaskId>(t);
    }
    return std::nullopt;
  }

  /// Throws ValidationError unless every label is exactly 0 or 1.
  void require_binary_labels() const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] != 0.0 && labels_[i] != 1.0) {
        throw ValidationError("non-binary label " + std::to_string(labels_[i]) + " at row " +
                              std::to_string(i));
      }
    }
  }

  /// Rows in the given order. With `keep_tasks`, task ids and names are kept
  /// (tasks without rows in the subset are an error); otherwise tasks are
  /// re-densified in first-appearance order.
  Dataset subset(std::span<const RowIndex> rows, bool keep_tasks = true) const {
    std::vector<std::vector<Entry>> out_rows;
    std::vector<double> out_labels;
    std::vector<TaskId> out_tasks;
    out_rows.reserve(rows.size());
    std::vector<std::string> names;
    std::unordered_map<TaskId, TaskId> remap;
    for (RowIndex r : rows) {
      auto entries = row(r);
      out_rows.emplace_back(entries.begin(), entries.end());
      out_labels.push_back(labels_[r]);
      TaskId t = task_of_[r];
      if (!keep_tasks) {
        auto [it, inserted] = remap.try_emplace(t, static_cast<TaskId>(names.size()));
        if (inserted) names.push_back(task_names_[static_cast<std::size_t>(t)]);
        t = it->second;
      }
      out_tasks.push_back(t);
    }
    return Dataset(std::move(out_rows), std::move(out_labels), std::move(out_tasks), n_features_,
                   keep_tasks ? task_names_ : names, feature_names_);
  }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.entries_ == b.entries_ && a.row_ptr_ == b.row_ptr_ && a.labels_ == b.labels_ &&
           a.task_of_ == b.task_of_ && a.n_features_ == b.n_features_ &&
           a.task_names_ == b.task_names_;
  }

 private:
  std::vector<Entry> entries_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<double> labels_;
  std::vector<TaskId> task_of_;
  std::size_t n_features_ = 0;
  std::vector<std::vector<RowIndex>> task_index_;
  std::vector<std::string> task_names_;
  std::vector<std::string> feature_names_;
};

}  // namespace tsgb
