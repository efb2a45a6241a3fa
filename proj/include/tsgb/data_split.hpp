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
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tsgb/dataset.hpp"
#include "tsgb/random.hpp"

namespace tsgb {

/// Disjoint train/valid/test row sets covering a dataset. Each list is sorted.
struct DataSplit {
  std::vector<RowIndex> train;
  std::vector<RowIndex> valid;
  std::vector<RowIndex> test;
  std::uint64_t seed = 0;

  friend bool operator==(const DataSplit& a, const DataSplit& b) {
    return a.train == b.train && a.valid == b.valid && a.test == b.test;
  }
};

struct SplitRatios {
  double train = 0.6;
  double valid = 0.2;
  double test = 0.2;
};

/// Row counts (train, valid, test) for one task of n rows. Train is rounded
/// up, valid down, and test takes the rest, which keeps each count within one
/// row of its exact share.
inline std::array<std::size_t, 3> split_counts(std::size_t n, const SplitRatios& r) {
  constexpr double eps = 1e-9;
  const auto nd = static_cast<double>(n);
  auto n_train = static_cast<std::size_t>(std::ceil(nd * r.train - eps));
  auto n_valid = static_cast<std::size_t>(std::floor(nd * r.valid + eps));
  n_train = std::min(n_train, n);
  n_valid = std::min(n_valid, n - n_train);
  return {n_train, n_valid, n - n_train - n_valid};
}

/// Per-task stratified shuffle split. Tasks with fewer than 3 rows go
/// entirely to train.
inline DataSplit split_dataset(const Dataset& ds, const SplitRatios& ratios, std::uint64_t seed) {
  if (ratios.train <= 0 || ratios.valid <= 0 || ratios.test <= 0 ||
      std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be positive and sum to 1");
  }
  DataSplit split;
  split.seed = seed;
  for (TaskId t = 0; t < static_cast<TaskId>(ds.n_tasks()); ++t) {
    auto src = ds.task_rows(t);
    std::vector<RowIndex> rows(src.begin(), src.end());
    if (rows.size() < 3) {
      warn("task '" + ds.task_names()[static_cast<std::size_t>(t)] + "' has " +
           std::to_string(rows.size()) + " rows; all assigned to train");
      split.train.insert(split.train.end(), rows.begin(), rows.end());
      continue;
    }
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
    rng.shuffle(std::span<RowIndex>(rows));
    const auto [n_train, n_valid, n_test] = split_counts(rows.size(), ratios);
    split.train.insert(split.train.end(), rows.begin(), rows.begin() + static_cast<long>(n_train));
    split.valid.insert(split.valid.end(), rows.begin() + static_cast<long>(n_train),
                       rows.begin() + static_cast<long>(n_train + n_valid));
    split.test.insert(split.test.end(), rows.begin() + static_cast<long>(n_train + n_valid), rows.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.valid.begin(), split.valid.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

/// Keeps ceil(fraction * n_t) of each task's rows from `rows` (at least one
/// per task present), chosen by a seeded shuffle. Output is sorted.
inline std::vector<RowIndex> subsample_per_task(const Dataset& ds, std::span<const RowIndex> rows,
                                                double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("volume fraction must be in (0, 1]");
  std::vector<std::vector<RowIndex>> by_task(ds.n_tasks());
  for (RowIndex r : rows) by_task[static_cast<std::size_t>(ds.task(r))].push_back(r);
  std::vector<RowIndex> out;
  for (std::size_t t = 0; t < by_task.size(); ++t) {
    auto& v = by_task[t];
    if (v.empty()) continue;
    Rng rng = Rng::derive(seed ^ 0x5bd1e995ULL, t);
    rng.shuffle(std::span<RowIndex>(v));
    auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(v.size()) - 1e-9));
    keep = std::clamp<std::size_t>(keep, 1, v.size());
    out.insert(out.end(), v.begin(), v.begin() + static_cast<long>(keep));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Throws ValidationError when a split names a row outside the dataset or
/// puts a row in two lists.
inline void check_split(const DataSplit& split, const Dataset& ds) {
  std::vector<char> seen(ds.n_rows(), 0);
  for (const auto* list : {&split.train, &split.valid, &split.test}) {
    for (RowIndex r : *list) {
      if (r >= ds.n_rows()) {
        throw ValidationError("split row " + std::to_string(r) + " outside dataset of " + std::to_string(ds.n_rows()) +
                              " rows");
      }
      if (seen[r]++) throw ValidationError("split lists row " + std::to_string(r) + " twice");
    }
  }
}

/// Three lines (train, valid, test), each a space-separated index list.
inline void write_split(const DataSplit& split, std::ostream& out) {
  for (const auto* list : {&split.train, &split.valid, &split.test}) {
    for (std::size_t i = 0; i < list->size(); ++i) out << (i ? " " : "") << (*list)[i];
    out << '\n';
  }
}

inline DataSplit read_split(std::istream& in) {
  DataSplit split;
  std::string line;
  for (auto* list : {&split.train, &split.valid, &split.test}) {
    if (!std::getline(in, line)) throw ParseError("split file needs three lines", 0);
    std::istringstream ls(line);
    long long v;
    while (ls >> v) {
      if (v < 0) throw ParseError("negative row index in split file", 0);
      list->push_back(static_cast<RowIndex>(v));
    }
  }
  return split;
}

inline void save_split(const DataSplit& split, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_split(split, out);
}

inline DataSplit load_split(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_split(in);
}

}  // namespace tsgb
