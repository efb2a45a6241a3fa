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

#include <bit>
#include <cstdint>
#include <vector>

#include "tsgb/common.hpp"

namespace tsgb {

/// Set of dense task ids, stored as a bitmask.
class TaskSet {
 public:
  TaskSet() = default;

  void insert(TaskId t) {
    const auto w = static_cast<std::size_t>(t) / 64;
    if (words_.size() <= w) words_.resize(w + 1, 0);
    words_[w] |= std::uint64_t{1} << (t % 64);
  }

  bool contains(TaskId t) const {
    if (t < 0) return false;
    const auto w = static_cast<std::size_t>(t) / 64;
    return w < words_.size() && ((words_[w] >> (t % 64)) & 1U) != 0;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool empty() const { return size() == 0; }

  /// Members in ascending order.
  std::vector<TaskId> members() const {
    std::vector<TaskId> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (std::uint64_t bits = words_[w]; bits != 0; bits &= bits - 1) {
        out.push_back(static_cast<TaskId>(w * 64 + std::countr_zero(bits)));
      }
    }
    return out;
  }

  static TaskSet of(const std::vector<TaskId>& ids) {
    TaskSet s;
    for (auto t : ids) s.insert(t);
    return s;
  }

  friend bool operator==(const TaskSet& a, const TaskSet& b) { return a.members() == b.members(); }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace tsgb
