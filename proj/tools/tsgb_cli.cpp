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


// tsgb: train, predict, evaluate, diagnose, sweep, synth, export-dot.
//
// Exit codes: 0 success, 2 invalid configuration or arguments, 3 data or
// model errors.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsgb/tsgb.hpp"

namespace {

using namespace tsgb;
namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

// ---------------------------------------------------------------------------
// Shared option groups

struct DataArgs {
  std::string path;
  std::string label_col = "label";
  std::string task_col = "task";
  bool regression = false;

  void add(CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--data", path, "Dataset: .csv, or extended LIBSVM for any other extension");
    if (required) opt->required();
    cmd->add_option("--label-col", label_col, "CSV label column")->capture_default_str();
    cmd->add_option("--task-col", task_col, "CSV task column")->capture_default_str();
    cmd->add_flag("--regression", regression, "Allow non-binary labels (use with --loss mse)");
  }

  Dataset load() const {
    CsvOptions opts;
    opts.classification = !regression;
    return load_dataset(path, label_col, task_col, opts);
  }
};

/// Flat flag overrides for the booster config; unset flags leave the config
/// file's value alone.
struct ConfigArgs {
  std::string config_path;
  std::string mode;
  std::optional<int> specific_trees;
  std::map<std::string, std::optional<double>> reals;
  std::map<std::string, std::optional<int>> ints;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> loss, policy;
  bool mtb_independent = false;

  void add(CLI::App* cmd, const std::string& default_mode = "") {
    mode = default_mode;
    cmd->add_option("--config", config_path, "JSON config file; flags override its keys");
    cmd->add_option("--mode", mode, "pooled | tsgb | tsgb_lambda | single_task | mtb");
    cmd->add_option("--specific-trees", specific_trees, "MT-B: trees per task-specific forest");
    for (const char* k : {"learning_rate", "lambda", "alpha", "gamma", "min_child_weight", "subsample",
                          "colsample_bytree", "colsample_bylevel", "R", "tsgb_lambda"}) {
      std::string flag = std::string("--") + k;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (std::string(k) == "R") flag = "--R";
      cmd->add_option(flag, reals[k]);
    }
    for (const char* k : {"n_trees", "max_depth", "early_stopping_rounds", "tsgb_start_tree"}) {
      std::string flag = std::string("--") + k;
      std::replace(flag.begin(), flag.end(), '_', '-');
      cmd->add_option(flag, ints[k]);
    }
    cmd->add_option("--seed", seed, "Base seed for training and the split");
    cmd->add_option("--loss", loss, "logloss | mse");
    cmd->add_option("--unseen-task-policy", policy, "majority | strict");
    cmd->add_flag("--mtb-independent", mtb_independent, "MT-B: fit task forests from scratch");
  }
};

struct ResolvedConfig {
  TrainConfig cfg;
  bool mtb = false;
  int specific_trees = 0;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

int env_threads() {
  const char* v = std::getenv("TSGB_THREADS");
  if (!v || !*v) return 1;
  try {
    const int n = std::stoi(v);
    if (n >= 1) return n;
  } catch (const std::logic_error&) {
  }
  throw ConfigError(std::string("TSGB_THREADS must be a positive integer, got '") + v + "'");
}

ResolvedConfig resolve(const ConfigArgs& a) {
  json j = a.config_path.empty() ? json::object() : read_json(a.config_path);
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ResolvedConfig out;
  std::string mode = j.value("mode", std::string());
  if (!a.mode.empty()) mode = a.mode;
  j.erase("mode");
  if (j.contains("specific_trees")) {
    if (!j["specific_trees"].is_number_integer()) throw ConfigError("specific_trees must be an integer");
    out.specific_trees = j["specific_trees"].get<int>();
    j.erase("specific_trees");
  }
  for (const auto& [k, v] : a.reals) {
    if (v) j[k] = *v;
  }
  for (const auto& [k, v] : a.ints) {
    if (v) j[k] = *v;
  }
  if (a.seed) j["seed"] = *a.seed;
  if (a.loss) j["loss"] = *a.loss;
  if (a.policy) j["unseen_task_policy"] = *a.policy;
  if (a.mtb_independent) j["mtb_independent"] = true;
  apply_json(out.cfg, j);
  if (mode == "mtb") {
    out.mtb = true;
    out.cfg.mode = TrainMode::kPooled;
  } else if (!mode.empty()) {
    out.cfg.mode = parse_mode(mode);
  }
  if (a.specific_trees) out.specific_trees = *a.specific_trees;
  if (out.mtb && out.specific_trees < 0) throw ConfigError("--specific-trees must be >= 0");
  out.cfg.n_threads = env_threads();
  out.cfg.validate();
  return out;
}

std::string mode_label(const ResolvedConfig& rc) { return rc.mtb ? "mtb" : mode_name(rc.cfg.mode); }

BaselineResult run_training(const Dataset& ds, const DataSplit& split, const ResolvedConfig& rc) {
  if (!rc.mtb) return train_any(ds, split, rc.cfg);
  TrainConfig spec = rc.cfg;
  spec.n_trees = std::max(1, rc.specific_trees);
  return train_mtb(ds, split, rc.cfg, spec, rc.specific_trees);
}

std::vector<NodeDiagnostics> all_diagnostics(const BaselineResult& res) {
  std::vector<NodeDiagnostics> out;
  for (const auto& r : res.reports) out.insert(out.end(), r.diagnostics.begin(), r.diagnostics.end());
  return out;
}

json report_json(const TrainReport& r) {
  return {{"n_trees", r.n_trees},
          {"best_iteration", r.best_iteration},
          {"valid_metric", r.valid_metric},
          {"n_feature_nodes", r.n_feature_nodes},
          {"n_task_nodes", r.n_task_nodes},
          {"n_leaves", r.n_leaves}};
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
}

DataSplit obtain_split(const Dataset& ds, const std::string& split_path, std::uint64_t seed) {
  if (split_path.empty()) return split_dataset(ds, {}, seed);
  DataSplit s = load_split(split_path);
  check_split(s, ds);
  s.seed = seed;
  return s;
}

std::vector<RowIndex> select_rows(const Dataset& ds, const std::string& split_path, const std::string& subset) {
  if (split_path.empty()) {
    if (subset != "all") throw ConfigError("--subset " + subset + " needs --split");
    return all_rows(ds);
  }
  const DataSplit s = load_split(split_path);
  check_split(s, ds);
  if (subset == "train") return s.train;
  if (subset == "valid") return s.valid;
  if (subset == "test") return s.test;
  if (subset == "all") return all_rows(ds);
  throw ConfigError("--subset must be train | valid | test | all");
}

// ---------------------------------------------------------------------------
// train

struct TrainCmd {
  DataArgs data;
  ConfigArgs config;
  std::string split_path;
  std::string out_dir;
  int seeds = 1;
};

/// One training run written to `dir`; returns the test evaluation.
std::optional<EvalReport> train_into(const Dataset& ds, const DataSplit& split, const ResolvedConfig& rc,
                                     const fs::path& dir) {
  fs::create_directories(dir);
  const auto res = run_training(ds, split, rc);
  save_any(res.model, (dir / "model.json").string());
  save_split(split, (dir / "split.txt").string());
  {
    std::ofstream out(dir / "diagnostics.csv");
    if (!out) throw Error("cannot write diagnostics.csv");
    for (std::size_t i = 0; i < res.reports.size(); ++i) {
      write_diagnostics_csv(res.reports[i].diagnostics, ds.task_names(), out, static_cast<int>(i), i == 0);
    }
  }
  json rep{{"mode", mode_label(rc)}, {"config", to_json(rc.cfg)}, {"split_seed", split.seed}};
  if (rc.mtb) rep["specific_trees"] = rc.specific_trees;
  json forests = json::array();
  for (const auto& r : res.reports) forests.push_back(report_json(r));
  rep["forests"] = std::move(forests);
  rep["rneg"] = to_json(rneg_histogram(all_diagnostics(res)));
  std::optional<EvalReport> test;
  for (const auto& [name, rows] : {std::pair{"valid", &split.valid}, std::pair{"test", &split.test}}) {
    if (rows->empty()) continue;
    const auto eval = evaluate_scores(ds, *rows, predict(res.model, ds, *rows));
    rep[name] = to_json(eval);
    if (std::string(name) == "test") test = eval;
  }
  write_text(dir / "report.json", rep.dump(2) + "\n");
  return test;
}

void cmd_train(const TrainCmd& c) {
  if (c.seeds < 1) throw ConfigError("--seeds must be >= 1");
  const ResolvedConfig base = resolve(c.config);
  const Dataset ds = c.data.load();
  const fs::path out(c.out_dir);
  if (c.seeds == 1) {
    const auto split = obtain_split(ds, c.split_path, base.cfg.seed);
    const auto test = train_into(ds, split, base, out);
    if (test) std::cout << format_table(*test);
    return;
  }
  std::vector<std::vector<double>> per_task(ds.n_tasks());
  std::vector<double> avg;
  json runs = json::array();
  for (int i = 0; i < c.seeds; ++i) {
    ResolvedConfig rc = base;
    rc.cfg.seed = base.cfg.seed + static_cast<std::uint64_t>(i);
    const auto split = obtain_split(ds, c.split_path, rc.cfg.seed);
    const auto dir = out / ("seed_" + std::to_string(rc.cfg.seed));
    const auto test = train_into(ds, split, rc, dir);
    if (!test) throw ConfigError("--seeds needs a nonempty test split");
    for (std::size_t t = 0; t < ds.n_tasks(); ++t) {
      if (!std::isnan(test->per_task_auc[t])) per_task[t].push_back(test->per_task_auc[t]);
    }
    avg.push_back(test->avg_auc);
    runs.push_back({{"seed", rc.cfg.seed}, {"dir", dir.filename().string()}, {"test", to_json(*test)}});
  }
  json tasks = json::array();
  std::ostringstream table;
  table << "task,mean_auc,ci95,n\n";
  auto add = [&](const std::string& name, const std::vector<double>& xs) {
    const auto m = mean_ci(xs);
    tasks.push_back({{"task", name}, {"mean_auc", m.mean}, {"ci95", m.ci95}, {"n", xs.size()}});
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12s %6.2f +- %.2f\n", name.c_str(), 100 * m.mean, 100 * m.ci95);
    std::cout << buf;
  };
  for (std::size_t t = 0; t < ds.n_tasks(); ++t) add(ds.task_names()[t], per_task[t]);
  add("AVG", avg);
  json summary{{"mode", mode_label(base)}, {"seeds", c.seeds}, {"per_task", tasks}, {"runs", runs}};
  write_text(out / "summary.json", summary.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// predict / evaluate

struct PredictCmd {
  std::string model_path;
  DataArgs data;
  std::string split_path;
  std::string subset = "all";
  std::string out_path;
  std::optional<double> threshold;
};

void cmd_predict(const PredictCmd& c) {
  const AnyModel model = load_any(c.model_path);
  const Dataset ds = c.data.load();
  const auto rows = select_rows(ds, c.split_path, c.subset);
  const auto scores = predict(model, ds, rows);
  std::ostringstream text;
  text << "row,task,score\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    text << rows[i] << ',' << detail::csv_quote(ds.task_names()[static_cast<std::size_t>(ds.task(rows[i]))]) << ','
         << detail::format_double(scores[i]) << '\n';
  }
  if (c.out_path.empty()) {
    std::cout << text.str();
  } else {
    write_text(c.out_path, text.str());
  }
}

void cmd_evaluate(const PredictCmd& c) {
  const AnyModel model = load_any(c.model_path);
  const Dataset ds = c.data.load();
  const auto rows = select_rows(ds, c.split_path, c.subset);
  const auto rep = evaluate_scores(ds, rows, predict(model, ds, rows), c.threshold);
  if (!c.out_path.empty()) write_text(c.out_path, to_json(rep).dump(2) + "\n");
  std::cout << format_table(rep);
}

// ---------------------------------------------------------------------------
// diagnose

struct DiagnoseCmd {
  std::string diagnostics_path;
  DataArgs data;
  ConfigArgs config;
  std::string split_path;
  std::string out_path;
};

void cmd_diagnose(const DiagnoseCmd& c) {
  std::vector<NodeDiagnostics> diags;
  if (!c.diagnostics_path.empty()) {
    std::ifstream in(c.diagnostics_path);
    if (!in) throw ParseError("cannot open '" + c.diagnostics_path + "'", 0);
    diags = read_diagnostics_csv(in);
  } else {
    if (c.data.path.empty()) throw ConfigError("diagnose needs --diagnostics or --data");
    ResolvedConfig rc = resolve(c.config);
    if (c.config.mode.empty()) {
      rc.cfg.mode = TrainMode::kPooled;
      rc.cfg.R = 1.0;
    }
    const Dataset ds = c.data.load();
    diags = all_diagnostics(run_training(ds, obtain_split(ds, c.split_path, rc.cfg.seed), rc));
  }
  const auto h = rneg_histogram(diags);
  if (!c.out_path.empty()) {
    std::ofstream out(c.out_path);
    if (!out) throw Error("cannot write '" + c.out_path + "'");
    write_histogram_csv(h, out);
  }
  std::cout << to_json(h).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// sweep

struct SweepCmd {
  DataArgs data;
  ConfigArgs config;
  std::vector<double> r_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  std::vector<double> volumes{1.0};
  int seeds = 1;
  std::string split_path;
  std::string out_path;
};

void cmd_sweep(const SweepCmd& c) {
  if (c.seeds < 1) throw ConfigError("--seeds must be >= 1");
  if (c.r_grid.empty() || c.volumes.empty()) throw ConfigError("grids must be nonempty");
  ResolvedConfig base = resolve(c.config);
  if (base.mtb || base.cfg.mode == TrainMode::kSingleTask) throw ConfigError("sweep trains a single forest per cell");
  if (c.config.mode.empty()) base.cfg.mode = TrainMode::kTsgb;
  const Dataset ds = c.data.load();
  std::ostringstream csv;
  csv << "R,volume,seed";
  for (const auto& t : ds.task_names()) csv << ',' << detail::csv_quote("auc_" + t);
  csv << ",AVG\n";
  for (int i = 0; i < c.seeds; ++i) {
    const std::uint64_t seed = base.cfg.seed + static_cast<std::uint64_t>(i);
    const DataSplit split = obtain_split(ds, c.split_path, seed);
    if (split.test.empty()) throw ConfigError("sweep needs a nonempty test split");
    for (double vol : c.volumes) {
      DataSplit cell = split;
      cell.train = subsample_per_task(ds, split.train, vol, seed);
      for (double R : c.r_grid) {
        TrainConfig cfg = base.cfg;
        cfg.R = R;
        cfg.seed = seed;
        cfg.validate();
        const auto res = train(ds, cell, cfg);
        const auto rep = evaluate_scores(ds, cell.test, predict(res.model, ds, cell.test));
        csv << detail::format_double(R) << ',' << detail::format_double(vol) << ',' << seed;
        for (double a : rep.per_task_auc) csv << ',' << (std::isnan(a) ? std::string() : detail::format_double(a));
        csv << ',' << detail::format_double(rep.avg_auc) << '\n';
      }
    }
  }
  if (c.out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_text(c.out_path, csv.str());
  }
}

// ---------------------------------------------------------------------------
// synth

struct SynthCmd {
  std::string spec_path;
  std::string out_path;
  std::string spec_out;
  std::optional<int> n_tasks, rows_per_task, n_features;
  std::optional<double> conflict_rate, label_noise, weight_scale, divergence_scale, missing_rate;
  std::optional<std::uint64_t> seed;
};

void cmd_synth(const SynthCmd& c) {
  json j = c.spec_path.empty() ? json::object() : read_json(c.spec_path);
  auto set = [&](const char* k, const auto& v) {
    if (v) j[k] = *v;
  };
  set("n_tasks", c.n_tasks);
  set("rows_per_task", c.rows_per_task);
  set("n_features", c.n_features);
  set("conflict_rate", c.conflict_rate);
  set("label_noise", c.label_noise);
  set("weight_scale", c.weight_scale);
  set("divergence_scale", c.divergence_scale);
  set("missing_rate", c.missing_rate);
  set("seed", c.seed);
  const SynthSpec spec = synth_spec_from_json(j);
  save_csv(generate(spec), c.out_path);
  fs::path spec_out = c.spec_out;
  if (spec_out.empty()) {
    const fs::path p(c.out_path);
    spec_out = p.parent_path() / (p.stem().string() + ".spec.json");
  }
  write_text(spec_out, to_json(spec).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// export-dot

struct DotCmd {
  std::string model_path;
  int tree = 0;
  std::string member;
  std::string out_path;
};

void cmd_export_dot(const DotCmd& c) {
  const AnyModel any = load_any(c.model_path);
  const Model* model = nullptr;
  if (const auto* m = std::get_if<Model>(&any)) {
    model = m;
  } else if (const auto* pt = std::get_if<PerTaskModel>(&any)) {
    for (std::size_t t = 0; t < pt->task_names.size(); ++t) {
      if (pt->task_names[t] == c.member) model = &pt->models[t];
    }
    if (!model) throw ConfigError("per-task model: --member must name a task");
  } else {
    const auto& mtb = std::get<MtbModel>(any);
    if (c.member.empty() || c.member == "common") {
      model = &mtb.common;
    } else {
      for (std::size_t t = 0; t < mtb.task_names.size(); ++t) {
        if (mtb.task_names[t] == c.member) model = &mtb.specific[t];
      }
      if (!model) throw ConfigError("MT-B model: --member must be 'common' or a task name");
    }
  }
  if (c.tree < 0 || static_cast<std::size_t>(c.tree) >= model->trees.size()) {
    throw ConfigError("tree index " + std::to_string(c.tree) + " out of range [0, " +
                      std::to_string(model->trees.size()) + ")");
  }
  const std::string dot = to_dot(model->trees[static_cast<std::size_t>(c.tree)], model->task_names);
  if (c.out_path.empty()) {
    std::cout << dot;
  } else {
    write_text(c.out_path, dot);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task-wise split gradient boosting trees for multi-task learning"};
  app.require_subcommand(1);

  TrainCmd train_c;
  auto* train = app.add_subcommand("train", "Train a model; writes model.json, report.json, diagnostics.csv");
  train_c.data.add(train);
  train_c.config.add(train);
  train->add_option("--split", train_c.split_path, "Split file (three index lines); default: seeded 3:1:1 split");
  train->add_option("--out", train_c.out_dir, "Output directory")->required();
  train->add_option("--seeds", train_c.seeds, "Number of seeds (seed, seed+1, ...)")->capture_default_str();

  PredictCmd pred_c;
  auto* pred = app.add_subcommand("predict", "Score rows with a saved model");
  pred->add_option("--model", pred_c.model_path)->required();
  pred_c.data.add(pred);
  pred->add_option("--split", pred_c.split_path);
  pred->add_option("--subset", pred_c.subset, "train | valid | test | all")->capture_default_str();
  pred->add_option("--out", pred_c.out_path, "CSV output (default stdout)");

  PredictCmd eval_c;
  eval_c.subset = "test";
  auto* eval = app.add_subcommand("evaluate", "Per-task AUC and AVG for a saved model");
  eval->add_option("--model", eval_c.model_path)->required();
  eval_c.data.add(eval);
  eval->add_option("--split", eval_c.split_path);
  eval->add_option("--subset", eval_c.subset, "train | valid | test | all (default test with --split, else all)");
  eval->add_option("--threshold", eval_c.threshold, "Add accuracy/precision/recall/F1 at this score");
  eval->add_option("--out", eval_c.out_path, "JSON report path");

  DiagnoseCmd diag_c;
  auto* diag = app.add_subcommand("diagnose", "R_neg histogram from diagnostics.csv or a fresh pooled run");
  diag->add_option("--diagnostics", diag_c.diagnostics_path, "diagnostics.csv written by train");
  diag_c.data.add(diag, false);
  diag_c.config.add(diag);
  diag->add_option("--split", diag_c.split_path);
  diag->add_option("--out", diag_c.out_path, "Histogram CSV path");

  SweepCmd sweep_c;
  auto* sweep = app.add_subcommand("sweep", "Grid over R and per-task training volume");
  sweep_c.data.add(sweep);
  sweep_c.config.add(sweep);
  sweep->add_option("--R-grid", sweep_c.r_grid)->delimiter(',')->capture_default_str();
  sweep->add_option("--volumes", sweep_c.volumes, "Per-task training fractions, e.g. 0.1,0.25,0.5,1")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--seeds", sweep_c.seeds)->capture_default_str();
  sweep->add_option("--split", sweep_c.split_path);
  sweep->add_option("--out", sweep_c.out_path, "CSV output (default stdout)");

  SynthCmd synth_c;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic multi-task dataset");
  synth->add_option("--spec", synth_c.spec_path, "SynthSpec JSON; flags override it");
  synth->add_option("--out", synth_c.out_path, "CSV output")->required();
  synth->add_option("--spec-out", synth_c.spec_out, "Spec JSON output (default <out>.spec.json)");
  synth->add_option("--n-tasks", synth_c.n_tasks);
  synth->add_option("--rows-per-task", synth_c.rows_per_task);
  synth->add_option("--n-features", synth_c.n_features);
  synth->add_option("--conflict-rate", synth_c.conflict_rate);
  synth->add_option("--label-noise", synth_c.label_noise);
  synth->add_option("--weight-scale", synth_c.weight_scale);
  synth->add_option("--divergence-scale", synth_c.divergence_scale);
  synth->add_option("--missing-rate", synth_c.missing_rate);
  synth->add_option("--seed", synth_c.seed);

  DotCmd dot_c;
  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of one tree");
  dot->add_option("--model", dot_c.model_path)->required();
  dot->add_option("--tree", dot_c.tree, "Tree index")->capture_default_str();
  dot->add_option("--member", dot_c.member, "Task name (per-task / MT-B) or 'common'");
  dot->add_option("--out", dot_c.out_path, "DOT output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*train) cmd_train(train_c);
    else if (*pred) cmd_predict(pred_c);
    else if (*eval) {
      if (eval_c.split_path.empty() && eval->count("--subset") == 0) eval_c.subset = "all";
      cmd_evaluate(eval_c);
    } else if (*diag) cmd_diagnose(diag_c);
    else if (*sweep) cmd_sweep(sweep_c);
    else if (*synth) cmd_synth(synth_c);
    else if (*dot) cmd_export_dot(dot_c);
  } catch (const ConfigError& e) {
    std::cerr << "tsgb: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "tsgb: error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "tsgb: error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
