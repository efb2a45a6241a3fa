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

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "tsgb/tree.hpp"

namespace tsgb {

namespace detail {

inline std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

/// Graphviz rendering of one tree. Feature nodes read `f<i> < <thr>` with
/// their R_neg; task nodes list the tasks sent left; leaves show the weight
/// and per-task `pos|neg` training counts. Edges are labelled yes/no, with
/// `missing` on the default branch.
inline std::string to_dot(const Tree& tree, const std::vector<std::string>& task_names = {}) {
  auto task_label = [&](TaskId t) {
    const auto i = static_cast<std::size_t>(t);
    return i < task_names.size() ? task_names[i] : std::to_string(t);
  };
  std::ostringstream out;
  out << "digraph tree {\n  node [shape=box, fontname=\"Helvetica\"];\n";
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& nd = tree.nodes[i];
    std::string label;
    switch (nd.kind) {
      case NodeKind::kFeature:
        label = "f" + std::to_string(nd.feature) + " < " + detail::short_double(nd.threshold) +
                "\\nR_neg=" + detail::short_double(nd.r_neg);
        break;
      case NodeKind::kTask: {
        label = "task in {";
        bool first = true;
        for (TaskId t : nd.left_tasks.members()) {
          label += (first ? "" : ",") + detail::dot_escape(task_label(t));
          first = false;
        }
        label += "}\\nR_neg=" + detail::short_double(nd.r_neg);
        break;
      }
      case NodeKind::kLeaf: {
        label = "leaf=" + detail::short_double(nd.weight);
        for (const auto& c : nd.task_counts) {
          label += "\\n" + detail::dot_escape(task_label(c.task)) + ": " + std::to_string(c.pos) + "|" +
                   std::to_string(c.neg);
        }
        break;
      }
    }
    out << "  n" << i << " [label=\"" << label << "\"";
    if (nd.kind == NodeKind::kTask) out << ", style=filled, fillcolor=\"#ffe9b3\"";
    if (nd.is_leaf()) out << ", shape=ellipse";
    out << "];\n";
    if (nd.is_leaf()) continue;
    std::string yes = "yes", no = "no";
    if (nd.kind == NodeKind::kFeature) (nd.default_left ? yes : no) += ", missing";
    out << "  n" << i << " -> n" << nd.left << " [label=\"" << yes << "\"];\n";
    out << "  n" << i << " -> n" << nd.right << " [label=\"" << no << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace tsgb
