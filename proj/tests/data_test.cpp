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
#include <sstream>

#include "test_util.hpp"
#include "tsgb/data_split.hpp"
#include "tsgb/dataset.hpp"
#include "tsgb/io.hpp"

namespace tsgb {
namespace {

using testing::WarningCapture;

TEST(LoadCsv, TaskIdsRemappedInFirstAppearanceOrder) {
  std::istringstream in("x,label,center\n1,0,A\n2,1,B\n3,0,A\n");
  const Dataset ds = read_csv(in, "label", "center");
  EXPECT_EQ(ds.n_tasks(), 2u);
  EXPECT_EQ(ds.task(0), 0);
  EXPECT_EQ(ds.task(1), 1);
  EXPECT_EQ(ds.task(2), 0);
  EXPECT_EQ(ds.task_names(), (std::vector<std::string>{"A", "B"}));
}

TEST(LoadCsv, EmptyCellIsMissing) {
  std::istringstream in("f0,f1,f2,label,task\n1,2,3,0,a\n4,5,,1,a\n");
  const Dataset ds = read_csv(in, "label", "task");
  EXPECT_FALSE(ds.value(1, 2).has_value());
  EXPECT_EQ(*ds.value(1, 1), 5.0);
  EXPECT_EQ(*ds.value(0, 2), 3.0);
}

TEST(LoadCsv, FiftyFeatureColumnsPlusLabelAndCenter) {
  std::ostringstream csv;
  for (int f = 0; f < 50; ++f) csv << "q" << f << ',';
  csv << "diabetes,center\n";
  for (int r = 0; r < 4; ++r) {
    for (int f = 0; f < 50; ++f) csv << (r + f) % 3 << ',';
    csv << r % 2 << ",c" << r % 2 << '\n';
  }
  std::istringstream in(csv.str());
  const Dataset ds = read_csv(in, "diabetes", "center");
  EXPECT_EQ(ds.n_features(), 50u);
  EXPECT_EQ(ds.n_rows(), 4u);
}

TEST(LoadCsv, WrongColumnCountReportsLine) {
  std::istringstream in("a,label,task\n1,0,x\n1,2,0,x\n");
  try {
    read_csv(in, "label", "task");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadCsv, NonBinaryLabelIsValidationError) {
  std::istringstream in("a,label,task\n1,0.5,x\n");
  EXPECT_THROW(read_csv(in, "label", "task"), ValidationError);
  std::istringstream in2("a,label,task\n1,0.5,x\n");
  CsvOptions regression;
  regression.classification = false;
  EXPECT_NO_THROW(read_csv(in2, "label", "task", regression));
}

TEST(LoadCsv, MissingColumnsAreErrors) {
  std::istringstream in("a,y,task\n1,0,x\n");
  EXPECT_THROW(read_csv(in, "label", "task"), ParseError);
}

TEST(LoadCsv, StringEncodingOption) {
  std::istringstream in("color,label,task\nred,0,x\nblue,1,x\nred,1,x\n");
  EXPECT_THROW(read_csv(in, "label", "task"), ParseError);
  std::istringstream in2("color,label,task\nred,0,x\nblue,1,x\nred,1,x\n");
  CsvOptions opts;
  opts.encode_strings = true;
  const Dataset ds = read_csv(in2, "label", "task", opts);
  EXPECT_EQ(*ds.value(0, 0), 0.0);
  EXPECT_EQ(*ds.value(1, 0), 1.0);
  EXPECT_EQ(*ds.value(2, 0), 0.0);
}

TEST(LoadLibsvm, SingleSparseEntry) {
  std::istringstream in("1 0 3:0.5\n");
  const Dataset ds = read_libsvm_mt(in);
  EXPECT_EQ(ds.label(0), 1.0);
  EXPECT_EQ(ds.task_names()[0], "0");
  EXPECT_EQ(ds.n_features(), 3u);
  EXPECT_FALSE(ds.value(0, 0));
  EXPECT_FALSE(ds.value(0, 1));
  EXPECT_EQ(*ds.value(0, 2), 0.5);
}

TEST(LoadLibsvm, DensePrefixRow) {
  std::istringstream in("0 1 1:1 2:2\n");
  const Dataset ds = read_libsvm_mt(in);
  EXPECT_EQ(ds.task_names()[static_cast<std::size_t>(ds.task(0))], "1");
  EXPECT_EQ(*ds.value(0, 0), 1.0);
  EXPECT_EQ(*ds.value(0, 1), 2.0);
}

TEST(LoadLibsvm, Errors) {
  std::istringstream non_ascending("1 0 3:1 2:1\n");
  EXPECT_THROW(read_libsvm_mt(non_ascending), ParseError);
  std::istringstream no_task("1 3:1\n");
  EXPECT_THROW(read_libsvm_mt(no_task), ParseError);
  std::istringstream empty_task("1\n");
  EXPECT_THROW(read_libsvm_mt(empty_task), ParseError);
}

TEST(LoadLibsvm, HighDimensionalRowsStaySparse) {
  std::ostringstream out;
  for (int r = 0; r < 20; ++r) {
    out << r % 2 << " books";
    for (int k = 1; k <= 5; ++k) out << ' ' << (r * 211 + k * 997) % 5000 + 1 << ":1";
    out << '\n';
  }
  // indices must ascend; rebuild each line sorted
  std::istringstream src(out.str());
  std::ostringstream sorted;
  std::string line;
  while (std::getline(src, line)) {
    std::istringstream ls(line);
    std::string y, t, tok;
    ls >> y >> t;
    std::vector<int> idx;
    while (ls >> tok) idx.push_back(std::stoi(tok.substr(0, tok.find(':'))));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    sorted << y << ' ' << t;
    for (int i : idx) sorted << ' ' << i << ":1";
    sorted << " 5000:2\n";
  }
  std::istringstream in(sorted.str());
  const Dataset ds = read_libsvm_mt(in);
  EXPECT_EQ(ds.n_features(), 5000u);
  EXPECT_LE(ds.nnz(), 20u * 6u);
}

TEST(LibsvmRoundTrip, PreservesEverything) {
  std::mt19937_64 rng(5);
  const Dataset ds = testing::random_dataset(rng, 40, 6, 3, 0.3);
  std::stringstream io;
  write_libsvm_mt(ds, io);
  const Dataset back = read_libsvm_mt(io);
  // trailing all-missing columns shrink n_features; compare entries row by row
  ASSERT_EQ(back.n_rows(), ds.n_rows());
  for (RowIndex r = 0; r < ds.n_rows(); ++r) {
    ASSERT_EQ(back.label(r), ds.label(r));
    ASSERT_EQ(back.task_names()[static_cast<std::size_t>(back.task(r))],
              ds.task_names()[static_cast<std::size_t>(ds.task(r))]);
    const auto a = ds.row(r);
    const auto b = back.row(r);
    ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const Entry& x, const Entry& y) {
      return x.feature == y.feature && x.value == y.value;
    }));
  }
}

TEST(Dataset, TaskIndexPartitionsRows) {
  std::mt19937_64 rng(11);
  const Dataset ds = testing::random_dataset(rng, 50, 3, 4, 0.1);
  std::vector<int> seen(ds.n_rows(), 0);
  for (TaskId t = 0; t < static_cast<TaskId>(ds.n_tasks()); ++t) {
    for (RowIndex r : ds.task_rows(t)) {
      EXPECT_EQ(ds.task(r), t);
      ++seen[r];
    }
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(Dataset, RejectsInvalidInput) {
  EXPECT_THROW(Dataset({{}, {}}, {0, 1}, {0, 2}, 1, {"a", "b"}), ValidationError);
  EXPECT_THROW(Dataset({{}, {}}, {0, 1}, {0, 0}, 1, {"a", "b"}), ValidationError);
  EXPECT_THROW(Dataset({{{0, 1.0}, {0, 2.0}}}, {0}, {0}, 1, {"a"}), ValidationError);
  EXPECT_THROW(Dataset({{{3, 1.0}}}, {0}, {0}, 1, {"a"}), ValidationError);
  EXPECT_THROW(Dataset({{}}, {0, 1}, {0}, 1, {"a"}), ValidationError);
}

TEST(Dataset, SubsetRedensifiesTasks) {
  const Dataset ds = testing::make_dataset({{1}, {2}, {3}, {4}}, {0, 1, 0, 1}, {0, 1, 2, 1});
  const std::vector<RowIndex> rows{1, 3};
  const Dataset sub = ds.subset(rows, false);
  EXPECT_EQ(sub.n_tasks(), 1u);
  EXPECT_EQ(sub.task_names()[0], "task1");
  EXPECT_EQ(*sub.value(1, 0), 4.0);
}

TEST(CsvRoundTrip, RandomDatasetsWithMissingCells) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> x(30, std::vector<double>(5));
    std::vector<double> y(30);
    std::vector<TaskId> t(30);
    for (std::size_t i = 0; i < 30; ++i) {
      for (auto& v : x[i]) v = (rng() % 4 == 0) ? std::nan("") : u(rng) / 7.0;
      y[i] = static_cast<double>(rng() % 2);
      t[i] = static_cast<TaskId>(i % 3);
    }
    const Dataset ds = testing::make_dataset(x, y, t);
    std::stringstream io;
    write_csv(ds, io);
    const Dataset back = read_csv(io, "label", "task");
    ASSERT_TRUE(back == ds) << "trial " << trial;
  }
}

TEST(SplitDataset, ExactRatioSizes) {
  std::vector<std::vector<double>> x(100, {1.0});
  const Dataset ds = testing::make_dataset(x, std::vector<double>(100, 0.0), std::vector<TaskId>(100, 0));
  const auto split = split_dataset(ds, {0.6, 0.2, 0.2}, 7);
  EXPECT_EQ(split.train.size(), 60u);
  EXPECT_EQ(split.valid.size(), 20u);
  EXPECT_EQ(split.test.size(), 20u);
}

TEST(SplitDataset, ThreeOneOneOnHundredThousandRows) {
  const std::size_t n = 100000;
  std::vector<std::vector<Entry>> rows(n);
  std::vector<TaskId> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<TaskId>(i % 4);
  const Dataset ds(std::move(rows), std::vector<double>(n, 0.0), t, 1, {"a", "b", "c", "d"});
  const auto split = split_dataset(ds, {3.0 / 5, 1.0 / 5, 1.0 / 5}, 1);
  EXPECT_EQ(split.train.size(), 60000u);
  EXPECT_EQ(split.valid.size(), 20000u);
  EXPECT_EQ(split.test.size(), 20000u);
}

TEST(SplitDataset, DeterministicAndDisjoint) {
  std::mt19937_64 rng(1);
  const Dataset ds = testing::random_dataset(rng, 97, 2, 3, 0.0);
  const auto a = split_dataset(ds, {}, 42);
  const auto b = split_dataset(ds, {}, 42);
  EXPECT_TRUE(a == b);
  std::vector<int> seen(ds.n_rows(), 0);
  for (const auto* part : {&a.train, &a.valid, &a.test}) {
    for (RowIndex r : *part) ++seen[r];
  }
  for (int s : seen) EXPECT_EQ(s, 1);
  const auto c = split_dataset(ds, {}, 43);
  EXPECT_FALSE(a == c);
}

TEST(SplitDataset, TinyTaskGoesToTrainWithWarning) {
  const Dataset ds = testing::make_dataset({{1}, {2}, {3}, {4}, {5}, {6}}, {0, 1, 0, 1, 0, 1}, {0, 0, 0, 0, 1, 1});
  WarningCapture warnings;
  const auto split = split_dataset(ds, {}, 0);
  EXPECT_EQ(warnings.messages.size(), 1u);
  for (RowIndex r : {4u, 5u}) EXPECT_NE(std::find(split.train.begin(), split.train.end(), r), split.train.end());
}

TEST(SplitDataset, BadRatiosAreConfigErrors) {
  const Dataset ds = testing::make_dataset({{1}}, {0}, {0});
  EXPECT_THROW(split_dataset(ds, {0.5, 0.2, 0.2}, 0), ConfigError);
  EXPECT_THROW(split_dataset(ds, {1.0, 0.0, 0.0}, 0), ConfigError);
}

// Property: every task's train/valid/test counts are within one row of the
// exact ratio.
TEST(SplitDataset, PerTaskCountsWithinOneRowOfRatio) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n_tasks = 1 + rng() % 5;
    std::vector<TaskId> t;
    for (std::size_t k = 0; k < n_tasks; ++k) {
      const std::size_t n = 3 + rng() % 60;
      for (std::size_t i = 0; i < n; ++i) t.push_back(static_cast<TaskId>(k));
    }
    const std::size_t n = t.size();
    std::vector<std::vector<Entry>> rows(n);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < n_tasks; ++k) names.push_back(std::to_string(k));
    const Dataset ds(std::move(rows), std::vector<double>(n, 0.0), t, 1, names);
    const SplitRatios ratios{0.6, 0.2, 0.2};
    const auto split = split_dataset(ds, ratios, static_cast<std::uint64_t>(trial));
    for (TaskId k = 0; k < static_cast<TaskId>(n_tasks); ++k) {
      const double nt = static_cast<double>(ds.task_rows(k).size());
      const double expect[3] = {nt * 0.6, nt * 0.2, nt * 0.2};
      const std::vector<RowIndex>* parts[3] = {&split.train, &split.valid, &split.test};
      for (int p = 0; p < 3; ++p) {
        const auto got = std::count_if(parts[p]->begin(), parts[p]->end(), [&](RowIndex r) { return ds.task(r) == k; });
        EXPECT_LT(std::abs(static_cast<double>(got) - expect[p]), 1.0) << "trial " << trial << " part " << p;
      }
    }
  }
}

TEST(SplitFile, RoundTrip) {
  std::mt19937_64 rng(2);
  const Dataset ds = testing::random_dataset(rng, 31, 1, 2, 0.0);
  const auto split = split_dataset(ds, {}, 5);
  std::stringstream io;
  write_split(split, io);
  const auto back = read_split(io);
  EXPECT_EQ(back.train, split.train);
  EXPECT_EQ(back.valid, split.valid);
  EXPECT_EQ(back.test, split.test);
}

TEST(SubsamplePerTask, KeepsFractionOfEachTask) {
  std::vector<TaskId> t;
  for (int i = 0; i < 40; ++i) t.push_back(i < 30 ? 0 : 1);
  const Dataset ds(std::vector<std::vector<Entry>>(40), std::vector<double>(40, 0.0), t, 1, {"a", "b"});
  const auto rows = testing::iota_rows(40);
  const auto sub = subsample_per_task(ds, rows, 0.25, 3);
  const auto n0 = std::count_if(sub.begin(), sub.end(), [&](RowIndex r) { return ds.task(r) == 0; });
  const auto n1 = std::count_if(sub.begin(), sub.end(), [&](RowIndex r) { return ds.task(r) == 1; });
  EXPECT_EQ(n0, 8);
  EXPECT_EQ(n1, 3);
  EXPECT_EQ(subsample_per_task(ds, rows, 0.25, 3), sub);
}

}  // namespace
}  // namespace tsgb
