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

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tsgb/dataset.hpp"

namespace tsgb {

struct CsvOptions {
  /// Require labels in {0, 1}.
  bool classification = true;
  /// Integer-code non-numeric feature cells per column in first-appearance order.
  bool encode_strings = false;
};

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_no);
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Assigns dense task ids in first-appearance order.
class TaskRemap {
 public:
  TaskId id(const std::string& name) {
    auto [it, inserted] = ids_.try_emplace(name, static_cast<TaskId>(names_.size()));
    if (inserted) names_.push_back(name);
    return it->second;
  }
  std::vector<std::string> names() && { return std::move(names_); }

 private:
  std::unordered_map<std::string, TaskId> ids_;
  std::vector<std::string> names_;
};

}  // namespace detail

/// Reads a header-first CSV. Every column other than `label_col` and
/// `task_col` is a feature; an empty cell is a missing value.
inline Dataset read_csv(std::istream& in, const std::string& label_col, const std::string& task_col,
                        const CsvOptions& opts = {}) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("empty file, header row expected", 1);
  auto header = detail::split_csv_line(line, line_no);
  for (auto& h : header) h = std::string(detail::trim(h));
  int label_pos = -1, task_pos = -1;
  std::vector<std::string> feature_names;
  std::vector<int> feature_of_col(header.size(), -1);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == label_col) {
      label_pos = static_cast<int>(c);
    } else if (header[c] == task_col) {
      task_pos = static_cast<int>(c);
    } else {
      feature_of_col[c] = static_cast<int>(feature_names.size());
      feature_names.push_back(header[c]);
    }
  }
  if (label_pos < 0) throw ParseError("label column '" + label_col + "' not in header", 1);
  if (task_pos < 0) throw ParseError("task column '" + task_col + "' not in header", 1);

  std::vector<std::unordered_map<std::string, int>> codes(feature_names.size());
  std::vector<std::vector<Entry>> rows;
  std::vector<double> labels;
  std::vector<TaskId> tasks;
  detail::TaskRemap remap;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_csv_line(line, line_no);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " columns, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    std::vector<Entry> entries;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const int f = feature_of_col[c];
      if (f < 0) continue;
      const auto cell = detail::trim(fields[c]);
      if (cell.empty()) continue;
      double v;
      if (!detail::parse_double(cell, v)) {
        if (!opts.encode_strings) {
          throw ParseError("non-numeric value '" + std::string(cell) + "' in column '" +
                               feature_names[static_cast<std::size_t>(f)] + "'",
                           line_no);
        }
        auto& table = codes[static_cast<std::size_t>(f)];
        auto [it, inserted] = table.try_emplace(std::string(cell), static_cast<int>(table.size()));
        v = it->second;
      }
      if (std::isnan(v)) continue;
      entries.push_back({f, v});
    }
    double y;
    if (!detail::parse_double(fields[static_cast<std::size_t>(label_pos)], y)) {
      throw ParseError("unparseable label '" + fields[static_cast<std::size_t>(label_pos)] + "'",
                       line_no);
    }
    if (opts.classification && y != 0.0 && y != 1.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": non-binary label " +
                            fields[static_cast<std::size_t>(label_pos)]);
    }
    rows.push_back(std::move(entries));
    labels.push_back(y);
    tasks.push_back(remap.id(std::string(detail::trim(fields[static_cast<std::size_t>(task_pos)]))));
  }
  const std::size_t n_features = feature_names.size();
  return Dataset(std::move(rows), std::move(labels), std::move(tasks), n_features,
                 std::move(remap).names(), std::move(feature_names));
}

inline Dataset load_csv(const std::string& path, const std::string& label_col,
                        const std::string& task_col, const CsvOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_csv(in, label_col, task_col, opts);
}

/// Writes features (17 significant digits), then label and task name columns.
inline void write_csv(const Dataset& ds, std::ostream& out, const std::string& label_col = "label",
                      const std::string& task_col = "task") {
  for (const auto& name : ds.feature_names()) out << detail::csv_quote(name) << ',';
  out << label_col << ',' << task_col << '\n';
  std::vector<std::string> cells(ds.n_features());
  for (RowIndex r = 0; r < ds.n_rows(); ++r) {
    for (auto& c : cells) c.clear();
    for (const auto& e : ds.row(r)) cells[static_cast<std::size_t>(e.feature)] = detail::format_double(e.value);
    for (const auto& c : cells) out << c << ',';
    out << detail::format_double(ds.label(r)) << ','
        << detail::csv_quote(ds.task_names()[static_cast<std::size_t>(ds.task(r))]) << '\n';
  }
}

inline void save_csv(const Dataset& ds, const std::string& path, const std::string& label_col = "label",
                     const std::string& task_col = "task") {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_csv(ds, out, label_col, task_col);
}

/// Extended LIBSVM: `<label> <task_id> <idx>:<val> ...`, 1-based strictly
/// ascending indices. Unlisted indices are missing.
inline Dataset read_libsvm_mt(std::istream& in, bool classification = true) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<Entry>> rows;
  std::vector<double> labels;
  std::vector<TaskId> tasks;
  detail::TaskRemap remap;
  std::size_t n_features = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = detail::trim(line);
    if (rest.empty() || rest.front() == '#') continue;
    auto next_token = [&rest]() -> std::string_view {
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
      std::size_t end = 0;
      while (end < rest.size() && rest[end] != ' ' && rest[end] != '\t') ++end;
      auto tok = rest.substr(0, end);
      rest.remove_prefix(end);
      return tok;
    };
    const auto label_tok = next_token();
    double y;
    if (!detail::parse_double(label_tok, y)) {
      throw ParseError("unparseable label '" + std::string(label_tok) + "'", line_no);
    }
    if (classification && y != 0.0 && y != 1.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": non-binary label " +
                            std::string(label_tok));
    }
    const auto task_tok = next_token();
    if (task_tok.empty() || task_tok.find(':') != std::string_view::npos) {
      throw ParseError("missing task token", line_no);
    }
    std::vector<Entry> entries;
    long prev = 0;
    for (auto tok = next_token(); !tok.empty(); tok = next_token()) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError("expected idx:val, found '" + std::string(tok) + "'", line_no);
      }
      long idx = 0;
      auto idx_sv = tok.substr(0, colon);
      auto [p, ec] = std::from_chars(idx_sv.data(), idx_sv.data() + idx_sv.size(), idx);
      if (ec != std::errc() || p != idx_sv.data() + idx_sv.size() || idx < 1) {
        throw ParseError("bad feature index '" + std::string(idx_sv) + "'", line_no);
      }
      if (idx <= prev) throw ParseError("feature indices must be ascending", line_no);
      prev = idx;
      double v;
      if (!detail::parse_double(tok.substr(colon + 1), v)) {
        throw ParseError("bad feature value in '" + std::string(tok) + "'", line_no);
      }
      entries.push_back({static_cast<FeatureIndex>(idx - 1), v});
      n_features = std::max(n_features, static_cast<std::size_t>(idx));
    }
    rows.push_back(std::move(entries));
    labels.push_back(y);
    tasks.push_back(remap.id(std::string(task_tok)));
  }
  return Dataset(std::move(rows), std::move(labels), std::move(tasks), n_features,
                 std::move(remap).names());
}

inline Dataset load_libsvm_mt(const std::string& path, bool classification = true) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_libsvm_mt(in, classification);
}

inline void write_libsvm_mt(const Dataset& ds, std::ostream& out) {
  for (RowIndex r = 0; r < ds.n_rows(); ++r) {
    out << detail::format_double(ds.label(r)) << ' ' << ds.task_names()[static_cast<std::size_t>(ds.task(r))];
    for (const auto& e : ds.row(r)) out << ' ' << (e.feature + 1) << ':' << detail::format_double(e.value);
    out << '\n';
  }
}

/// Dispatch on extension: `.csv` goes to the CSV reader, anything else is
/// read as extended LIBSVM.
inline Dataset load_dataset(const std::string& path, const std::string& label_col = "label",
                            const std::string& task_col = "task", const CsvOptions& opts = {}) {
  const bool is_csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  return is_csv ? load_csv(path, label_col, task_col, opts) : load_libsvm_mt(path, opts.classification);
}

}  // namespace tsgb
