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

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "tsgb/baselines.hpp"
#include "tsgb/booster.hpp"

namespace tsgb {

inline constexpr const char* kModelFormat = "tsgb-model";
inline constexpr int kModelVersion = 1;

// Doubles are written in nlohmann's shortest round-trip form, so every
// weight and threshold reloads bit-identically.

inline nlohmann::json to_json(const TreeNode& nd) {
  nlohmann::json j{{"kind", node_kind_name(nd.kind)}, {"depth", nd.depth}, {"n_rows", nd.n_rows}};
  if (nd.kind == NodeKind::kLeaf) {
    j["weight"] = nd.weight;
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& c : nd.task_counts) counts.push_back({c.task, c.pos, c.neg});
    j["task_counts"] = std::move(counts);
    return j;
  }
  j["left"] = nd.left;
  j["right"] = nd.right;
  j["left_rows"] = nd.left_rows;
  j["right_rows"] = nd.right_rows;
  j["gain"] = nd.gain;
  j["r_neg"] = nd.r_neg;
  j["feature"] = nd.feature;
  j["threshold"] = nd.threshold;
  j["default_left"] = nd.default_left;
  if (nd.kind == NodeKind::kTask) j["left_tasks"] = nd.left_tasks.members();
  return j;
}

inline TreeNode node_from_json(const nlohmann::json& j) {
  TreeNode nd;
  const auto kind = j.at("kind").get<std::string>();
  nd.depth = j.at("depth").get<std::int32_t>();
  nd.n_rows = j.at("n_rows").get<std::uint64_t>();
  if (kind == "leaf") {
    nd.kind = NodeKind::kLeaf;
    nd.weight = j.at("weight").get<double>();
    for (const auto& c : j.at("task_counts")) {
      nd.task_counts.push_back({c.at(0).get<TaskId>(), c.at(1).get<std::uint32_t>(), c.at(2).get<std::uint32_t>()});
    }
    return nd;
  }
  if (kind == "feature") {
    nd.kind = NodeKind::kFeature;
  } else if (kind == "task") {
    nd.kind = NodeKind::kTask;
    nd.left_tasks = TaskSet::of(j.at("left_tasks").get<std::vector<TaskId>>());
  } else {
    throw ModelError("unknown node kind '" + kind + "'");
  }
  nd.left = j.at("left").get<std::int32_t>();
  nd.right = j.at("right").get<std::int32_t>();
  nd.left_rows = j.at("left_rows").get<std::uint64_t>();
  nd.right_rows = j.at("right_rows").get<std::uint64_t>();
  nd.gain = j.at("gain").get<double>();
  nd.r_neg = j.at("r_neg").get<double>();
  nd.feature = j.at("feature").get<FeatureIndex>();
  nd.threshold = j.at("threshold").get<double>();
  nd.default_left = j.at("default_left").get<bool>();
  return nd;
}

inline nlohmann::json to_json(const Model& m) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : m.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& nd : t.nodes) nodes.push_back(to_json(nd));
    trees.push_back(std::move(nodes));
  }
  return nlohmann::json{{"format", kModelFormat},
                        {"version", kModelVersion},
                        {"kind", "forest"},
                        {"loss", loss_name(m.loss)},
                        {"base_score", m.base_score},
                        {"n_features", m.n_features},
                        {"tasks", m.task_names},
                        {"features", m.feature_names},
                        {"config", to_json(m.config)},
                        {"trees", std::move(trees)}};
}

namespace detail {

inline void check_header(const nlohmann::json& j, const std::string& kind) {
  if (!j.is_object() || j.value("format", "") != kModelFormat) throw ModelError("not a tsgb model file");
  if (j.value("version", 0) != kModelVersion) {
    throw ModelError("unsupported model version " + j.value("version", nlohmann::json()).dump());
  }
  if (j.value("kind", "") != kind) throw ModelError("expected model kind '" + kind + "'");
}

}  // namespace detail

inline Model model_from_json(const nlohmann::json& j) {
  try {
    detail::check_header(j, "forest");
    Model m;
    m.loss = parse_loss(j.at("loss").get<std::string>());
    m.base_score = j.at("base_score").get<double>();
    m.n_features = j.at("n_features").get<std::size_t>();
    m.task_names = j.at("tasks").get<std::vector<std::string>>();
    m.feature_names = j.at("features").get<std::vector<std::string>>();
    m.config = config_from_json(j.at("config"));
    for (const auto& jt : j.at("trees")) {
      Tree t;
      for (const auto& jn : jt) t.nodes.push_back(node_from_json(jn));
      t.validate(m.n_features);
      for (const auto& nd : t.nodes) {
        if (nd.kind != NodeKind::kTask) continue;
        for (TaskId id : nd.left_tasks.members()) {
          if (static_cast<std::size_t>(id) >= m.task_names.size()) throw ModelError("task split names an unknown task");
        }
      }
      m.trees.push_back(std::move(t));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model: ") + e.what());
  } catch (const ConfigError& e) {
    throw ModelError(std::string("malformed model config: ") + e.what());
  }
}

namespace detail {

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(path + ": " + e.what());
  }
}

inline void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write " + path);
  out << j.dump(1) << '\n';
  if (!out) throw ModelError("write failed: " + path);
}

/// `<dir>/<stem>.<tag>.json` next to a manifest at `path`.
inline std::filesystem::path sibling(const std::filesystem::path& path, const std::string& tag) {
  return path.parent_path() / (path.stem().string() + "." + tag + ".json");
}

}  // namespace detail

inline void save_model(const Model& m, const std::string& path) { detail::write_json_file(to_json(m), path); }

inline Model load_model(const std::string& path) { return model_from_json(detail::read_json_file(path)); }

/// Writes a forest as is; per-task and MT-B models as a manifest at `path`
/// plus one forest file per member beside it.
inline void save_any(const AnyModel& model, const std::string& path) {
  const std::filesystem::path p(path);
  if (const auto* m = std::get_if<Model>(&model)) {
    save_model(*m, path);
    return;
  }
  nlohmann::json manifest{{"format", kModelFormat}, {"version", kModelVersion}};
  nlohmann::json members = nlohmann::json::array();
  if (const auto* pt = std::get_if<PerTaskModel>(&model)) {
    manifest["kind"] = "per_task";
    for (std::size_t t = 0; t < pt->models.size(); ++t) {
      const auto file = detail::sibling(p, "task" + std::to_string(t));
      save_model(pt->models[t], file.string());
      members.push_back(
          {{"task", pt->task_names[t]}, {"file", file.filename().string()}, {"train_rows", pt->train_rows[t]}});
    }
  } else {
    const auto& mtb = std::get<MtbModel>(model);
    manifest["kind"] = "mtb";
    const auto common = detail::sibling(p, "common");
    save_model(mtb.common, common.string());
    manifest["common"] = common.filename().string();
    for (std::size_t t = 0; t < mtb.specific.size(); ++t) {
      const auto file = detail::sibling(p, "task" + std::to_string(t));
      save_model(mtb.specific[t], file.string());
      members.push_back({{"task", mtb.task_names[t]}, {"file", file.filename().string()}});
    }
  }
  manifest["members"] = std::move(members);
  detail::write_json_file(manifest, path);
}

inline AnyModel load_any(const std::string& path) {
  const auto j = detail::read_json_file(path);
  const std::string kind = j.is_object() ? j.value("kind", "") : "";
  if (kind == "forest") return model_from_json(j);
  const auto dir = std::filesystem::path(path).parent_path();
  try {
    if (kind == "per_task") {
      detail::check_header(j, kind);
      PerTaskModel m;
      for (const auto& e : j.at("members")) {
        m.task_names.push_back(e.at("task").get<std::string>());
        m.models.push_back(load_model((dir / e.at("file").get<std::string>()).string()));
        m.train_rows.push_back(e.at("train_rows").get<std::size_t>());
      }
      return m;
    }
    if (kind == "mtb") {
      detail::check_header(j, kind);
      MtbModel m;
      m.common = load_model((dir / j.at("common").get<std::string>()).string());
      for (const auto& e : j.at("members")) {
        m.task_names.push_back(e.at("task").get<std::string>());
        m.specific.push_back(load_model((dir / e.at("file").get<std::string>()).string()));
      }
      if (m.task_names != m.common.task_names) throw ModelError("MT-B manifest tasks differ from the common forest");
      return m;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed manifest: ") + e.what());
  }
  throw ModelError("unknown model kind '" + kind + "' in " + path);
}

}  // namespace tsgb
