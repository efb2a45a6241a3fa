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
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tsgb/grow.hpp"
#include "tsgb/io.hpp"

namespace tsgb {

inline constexpr int kRnegBins = 20;  // width 0.05 over [0, 1]

/// Node counts over (floor(log10 node rows), R_neg bin) for nodes where a
/// feature-wise candidate existed.
struct RnegHistogram {
  /// (log10 bin, rneg bin) -> count; absent keys are zero.
  std::map<std::pair<int, int>, std::size_t> counts;
  std::size_t n_nodes = 0;
  double frac_positive = 0.0;  // R_neg > 0
  double frac_over_half = 0.0; // R_neg > 0.5

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [k, v] : counts) n += v;
    return n;
  }
};

inline int rneg_bin(double r_neg) {
  return std::clamp(static_cast<int>(std::floor(r_neg * kRnegBins)), 0, kRnegBins - 1);
}

inline int log10_count_bin(std::size_t n_rows) {
  return n_rows == 0 ? 0 : static_cast<int>(std::floor(std::log10(static_cast<double>(n_rows))));
}

inline RnegHistogram rneg_histogram(std::span<const NodeDiagnostics> diags) {
  RnegHistogram h;
  std::size_t pos = 0, half = 0;
  for (const auto& d : diags) {
    ++h.counts[{log10_count_bin(d.n_rows), rneg_bin(d.r_neg)}];
    pos += d.r_neg > 0.0 ? 1 : 0;
    half += d.r_neg > 0.5 ? 1 : 0;
  }
  h.n_nodes = diags.size();
  if (h.n_nodes > 0) {
    h.frac_positive = static_cast<double>(pos) / static_cast<double>(h.n_nodes);
    h.frac_over_half = static_cast<double>(half) / static_cast<double>(h.n_nodes);
  }
  return h;
}

inline void write_histogram_csv(const RnegHistogram& h, std::ostream& out) {
  out << "log10_count_bin,rneg_bin,count\n";
  for (const auto& [k, v] : h.counts) out << k.first << ',' << k.second << ',' << v << '\n';
}

/// Restores the bin counts; the scalar summaries are not part of the CSV.
inline RnegHistogram read_histogram_csv(std::istream& in) {
  RnegHistogram h;
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "log10_count_bin,rneg_bin,count") {
    throw ParseError("expected histogram header", 1);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line, line_no);
    if (cells.size() != 3) throw ParseError("expected 3 columns", line_no);
    try {
      const int a = std::stoi(cells[0]);
      const int b = std::stoi(cells[1]);
      const auto c = static_cast<std::size_t>(std::stoull(cells[2]));
      h.counts[{a, b}] += c;
      h.n_nodes += c;
    } catch (const std::logic_error&) {
      throw ParseError("bad integer cell", line_no);
    }
  }
  return h;
}

inline nlohmann::json to_json(const RnegHistogram& h) {
  return {{"n_nodes", h.n_nodes}, {"frac_rneg_positive", h.frac_positive}, {"frac_rneg_over_half", h.frac_over_half}};
}

/// One line per diagnosed node. Per-task gains and row counts follow as
/// `gain_<task>` / `rows_<task>` columns in task order.
inline void write_diagnostics_csv(std::span<const NodeDiagnostics> diags, const std::vector<std::string>& task_names,
                                  std::ostream& out, int model_index = 0, bool header = true) {
  if (header) {
    out << "model,tree,node,depth,n_rows,gain,r_neg,decision";
    for (const auto& t : task_names) out << ',' << detail::csv_quote("gain_" + t);
    for (const auto& t : task_names) out << ',' << detail::csv_quote("rows_" + t);
    out << '\n';
  }
  for (const auto& d : diags) {
    out << model_index << ',' << d.tree << ',' << d.node << ',' << d.depth << ',' << d.n_rows << ','
        << detail::format_double(d.gain) << ',' << detail::format_double(d.r_neg) << ',' << node_kind_name(d.decision);
    for (std::size_t t = 0; t < task_names.size(); ++t) {
      out << ',';
      if (t < d.task_gains.size() && t < d.task_counts.size() && d.task_counts[t] > 0) {
        out << detail::format_double(d.task_gains[t]);
      }
    }
    for (std::size_t t = 0; t < task_names.size(); ++t) {
      out << ',' << (t < d.task_counts.size() ? d.task_counts[t] : 0);
    }
    out << '\n';
  }
}

/// Reads the columns written by write_diagnostics_csv that the histogram
/// needs (tree, node, depth, n_rows, gain, r_neg, decision); per-task columns
/// are skipped.
inline std::vector<NodeDiagnostics> read_diagnostics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty diagnostics file", 1);
  const auto header = detail::split_csv_line(line, 1);
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (detail::trim(header[i]) == name) return i;
    }
    throw ParseError("diagnostics header lacks column '" + name + "'", 1);
  };
  const std::size_t c_tree = column("tree"), c_node = column("node"), c_depth = column("depth"),
                    c_rows = column("n_rows"), c_gain = column("gain"), c_rneg = column("r_neg"),
                    c_decision = column("decision");
  std::vector<NodeDiagnostics> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line, line_no);
    if (cells.size() != header.size()) throw ParseError("expected " + std::to_string(header.size()) + " columns", line_no);
    NodeDiagnostics d;
    try {
      d.tree = std::stoi(cells[c_tree]);
      d.node = std::stoi(cells[c_node]);
      d.depth = std::stoi(cells[c_depth]);
      d.n_rows = static_cast<std::size_t>(std::stoull(cells[c_rows]));
    } catch (const std::logic_error&) {
      throw ParseError("bad integer cell", line_no);
    }
    if (!detail::parse_double(cells[c_gain], d.gain) || !detail::parse_double(cells[c_rneg], d.r_neg)) {
      throw ParseError("bad numeric cell", line_no);
    }
    const auto& k = cells[c_decision];
    if (k == "feature") d.decision = NodeKind::kFeature;
    else if (k == "task") d.decision = NodeKind::kTask;
    else if (k == "leaf") d.decision = NodeKind::kLeaf;
    else throw ParseError("unknown decision '" + k + "'", line_no);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace tsgb
