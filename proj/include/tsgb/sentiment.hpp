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
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tsgb/dataset.hpp"
#include "tsgb/io.hpp"

namespace tsgb {

/// Loader for the "processed_acl" release of the multi-domain Amazon review
/// corpus: `<root>/<domain>/{positive,negative}.review`, one review per line
/// as `token:count ... #label#:positive|negative`. Tokens are unigrams and
/// bigrams (joined by '_').
struct SentimentOptions {
  std::vector<std::string> domains{"books", "dvd", "electronics", "kitchen"};
  /// Vocabulary size: the most frequent terms by document frequency over all
  /// loaded reviews; ties break lexicographically.
  std::size_t vocabulary = 5000;
};

namespace detail {

struct Review {
  std::vector<std::pair<std::string, double>> terms;
  double label;
};

inline std::vector<Review> read_reviews(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::vector<Review> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Review rv{{}, -1.0};
    std::size_t pos = 0;
    while (pos < line.size()) {
      const std::size_t end = std::min(line.find(' ', pos), line.size());
      const std::string_view tok(line.data() + pos, end - pos);
      pos = end + 1;
      if (tok.empty()) continue;
      const auto colon = tok.rfind(':');
      if (colon == std::string_view::npos) throw ParseError("token without count in " + path.string(), line_no);
      const auto key = tok.substr(0, colon);
      const auto val = tok.substr(colon + 1);
      if (key == "#label#") {
        rv.label = val == "positive" ? 1.0 : val == "negative" ? 0.0 : -1.0;
        continue;
      }
      double count = 0.0;
      if (!parse_double(val, count)) throw ParseError("bad count in " + path.string(), line_no);
      rv.terms.emplace_back(std::string(key), count);
    }
    if (rv.label < 0.0) throw ParseError("missing #label# in " + path.string(), line_no);
    out.push_back(std::move(rv));
  }
  return out;
}

}  // namespace detail

/// One task per domain (named after it), features = term counts over the
/// shared vocabulary. Terms outside the vocabulary are dropped.
inline Dataset load_sentiment(const std::string& root, const SentimentOptions& opts = {}) {
  std::vector<std::vector<detail::Review>> by_domain;
  for (const auto& d : opts.domains) {
    std::vector<detail::Review> reviews;
    for (const char* file : {"positive.review", "negative.review"}) {
      auto part = detail::read_reviews(std::filesystem::path(root) / d / file);
      reviews.insert(reviews.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    by_domain.push_back(std::move(reviews));
  }
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& reviews : by_domain) {
    for (const auto& rv : reviews) {
      for (const auto& [term, count] : rv.terms) ++df[term];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
  if (ranked.size() > opts.vocabulary) ranked.resize(opts.vocabulary);
  // feature order = lexicographic, so the column layout is independent of ties
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::unordered_map<std::string, FeatureIndex> index;
  std::vector<std::string> feature_names;
  for (const auto& [term, n] : ranked) {
    index.emplace(term, static_cast<FeatureIndex>(feature_names.size()));
    feature_names.push_back(term);
  }

  std::vector<std::vector<Entry>> rows;
  std::vector<double> labels;
  std::vector<TaskId> tasks;
  for (std::size_t d = 0; d < by_domain.size(); ++d) {
    for (const auto& rv : by_domain[d]) {
      std::vector<Entry> entries;
      for (const auto& [term, count] : rv.terms) {
        if (auto it = index.find(term); it != index.end()) entries.push_back({it->second, count});
      }
      std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.feature < b.feature; });
      // a term listed twice on one line keeps the summed count
      std::vector<Entry> merged;
      for (const auto& e : entries) {
        if (!merged.empty() && merged.back().feature == e.feature) {
          merged.back().value += e.value;
        } else {
          merged.push_back(e);
        }
      }
      rows.push_back(std::move(merged));
      labels.push_back(rv.label);
      tasks.push_back(static_cast<TaskId>(d));
    }
  }
  return Dataset(std::move(rows), std::move(labels), std::move(tasks), feature_names.size(), opts.domains,
                 std::move(feature_names));
}

}  // namespace tsgb
