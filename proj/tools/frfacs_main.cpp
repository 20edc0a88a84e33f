#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "frfacs/bench.hpp"
#include "frfacs/config_json.hpp"
#include "frfacs/errors.hpp"
#include "frfacs/simgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw frfacs::Error("cannot write " + path.string());
  out << text;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw frfacs::Error("cannot open config " + path);
  return json::parse(in);
}

struct ExperimentInputs {
  frfacs::FunctionalDataset data;
  std::string scenario_name;
};

// Data source: either {"scenario": "<name>"} or {"csv": "<path>"}.
ExperimentInputs load_data(const json& cfg) {
  const json& data = cfg.at("data");
  if (data.contains("scenario")) {
    const std::string name = data.at("scenario").get<std::string>();
    for (const auto& s : frfacs::default_scenarios()) {
      if (s.name == name) return {frfacs::generate(s.config), name};
    }
    throw frfacs::ConfigError("unknown scenario: " + name);
  }
  if (data.contains("csv")) {
    const std::string path = data.at("csv").get<std::string>();
    return {frfacs::load_dataset(path), fs::path(path).stem().string()};
  }
  throw frfacs::ConfigError("config needs data.scenario or data.csv");
}

frfacs::CvConfig parse_cv(const json& cfg, int workers_override) {
  frfacs::CvConfig cv;
  if (cfg.contains("cv")) {
    const json& c = cfg.at("cv");
    cv.folds = c.value("folds", cv.folds);
    cv.repeats = c.value("repeats", cv.repeats);
    cv.seed = c.value("seed", cv.seed);
    cv.workers = c.value("workers", cv.workers);
  }
  if (workers_override > 0) cv.workers = workers_override;
  return cv;
}

frfacs::ForestConfig parse_model(const json& cfg) {
  frfacs::ForestConfig model;
  if (cfg.contains("model")) cfg.at("model").get_to(model);
  return model;
}

int cmd_simulate(const std::string& scenario, const std::string& out_dir,
                 bool list) {
  const auto scenarios = frfacs::default_scenarios();
  if (list) {
    for (const auto& s : scenarios) std::cout << s.name << "\n";
    return 0;
  }
  fs::create_directories(out_dir);
  bool found = false;
  for (const auto& s : scenarios) {
    if (scenario != "all" && s.name != scenario) continue;
    found = true;
    frfacs::save_dataset(frfacs::generate(s.config),
                         (fs::path(out_dir) / (s.name + ".csv")).string());
  }
  if (!found) {
    std::cerr << "unknown scenario: " << scenario << "\n";
    return 1;
  }
  write_file(fs::path(out_dir) / "manifest.json",
             frfacs::scenario_manifest_json(scenarios));
  return 0;
}

int cmd_train(const std::string& data_path, const std::string& config_path,
              const std::string& out_dir, int workers) {
  const auto data = frfacs::load_dataset(data_path);
  frfacs::ForestConfig model_cfg;
  if (!config_path.empty()) model_cfg = parse_model(load_json(config_path));
  const auto model = frfacs::fit_forest(data, model_cfg, workers > 0 ? workers : 1);
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "model.json", frfacs::forest_to_json(model));

  const auto pred = frfacs::predict(model, data);
  const auto cm = frfacs::confusion(data.labels, pred.labels, data.num_classes);
  int minority = 0;
  {
    std::vector<long> counts(data.num_classes, 0);
    for (int y : data.labels) ++counts[y];
    for (int k = 1; k < data.num_classes; ++k) {
      if (counts[k] < counts[minority]) minority = k;
    }
  }
  write_file(fs::path(out_dir) / "train_report.json",
             frfacs::report(cm, minority).to_json());
  std::cout << "model written to " << out_dir << "\n";
  return 0;
}

int cmd_cv(const std::string& config_path, int workers) {
  const json cfg = load_json(config_path);
  auto inputs = load_data(cfg);
  frfacs::ModelSpec spec;
  if (cfg.contains("model") && cfg.at("model").value("kind", "") == "fknn") {
    spec.kind = frfacs::ModelSpec::Kind::fknn;
    spec.knn_k = cfg.at("model").value("k", spec.knn_k);
    spec.knn_metric = cfg.at("model").value("metric", "l2") == "dtw"
                          ? frfacs::CurveMetric::dtw
                          : frfacs::CurveMetric::l2;
  } else {
    spec.forest = parse_model(cfg);
  }
  const auto cv = parse_cv(cfg, workers);
  const auto result = frfacs::run_cv(inputs.data, spec, cv);
  const std::string out_dir = cfg.value("out", "out");
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / (inputs.scenario_name + "_cv.json"),
             frfacs::cv_result_json(result));
  for (const auto& [name, s] : result.summary) {
    std::cout << name << ": " << s.mean << " +/- " << s.sd << "\n";
  }
  return 0;
}

int cmd_ablate(const std::string& config_path, int workers) {
  const json cfg = load_json(config_path);
  auto inputs = load_data(cfg);
  const auto base = parse_model(cfg);
  const auto cv = parse_cv(cfg, workers);
  const auto result = frfacs::run_ablation(inputs.data, base, cv);
  const std::string out_dir = cfg.value("out", "out");
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / (inputs.scenario_name + "_ablation.json"),
             frfacs::ablation_json(result));
  write_file(fs::path(out_dir) / (inputs.scenario_name + "_ablation.csv"),
             frfacs::ablation_csv(result, inputs.scenario_name));
  for (const auto& v : result.variants) {
    const auto it = v.result.summary.find("minority_f1");
    std::cout << v.name << " minority_f1: "
              << (it != v.result.summary.end() ? it->second.mean : 0.0) << "\n";
  }
  return 0;
}

int cmd_grid(const std::string& config_path, int workers) {
  const json cfg = load_json(config_path);
  auto inputs = load_data(cfg);
  const auto base = parse_model(cfg);
  const auto cv = parse_cv(cfg, workers);

  frfacs::GridSpec grid;
  if (cfg.contains("grid")) {
    const json& g = cfg.at("grid");
    if (g.contains("n_trees")) g.at("n_trees").get_to(grid.n_trees);
    if (g.contains("max_depth")) {
      grid.max_depth.clear();
      for (const auto& d : g.at("max_depth")) {
        grid.max_depth.push_back(d.is_null()
                                     ? std::optional<int>{}
                                     : std::optional<int>{d.get<int>()});
      }
    }
    if (g.contains("min_samples_leaf")) g.at("min_samples_leaf").get_to(grid.min_samples_leaf);
    if (g.contains("fpca_m")) g.at("fpca_m").get_to(grid.fpca_m);
    if (g.contains("smote_target_ratio")) g.at("smote_target_ratio").get_to(grid.smote_target_ratio);
    if (g.contains("weight_scheme")) g.at("weight_scheme").get_to(grid.weight_scheme);
  }
  const double split = cfg.value("split", 0.7);
  const auto result = frfacs::grid_search(inputs.data, grid, cv, base, split);

  const std::string out_dir = cfg.value("out", "out");
  fs::create_directories(out_dir);
  json out;
  out["best"] = result.best;
  out["held_out"] = json::parse(result.held_out.to_json());
  auto& table = out["table"] = json::array();
  for (const auto& e : result.table) {
    table.push_back({{"config", e.config},
                     {"minority_f1", e.minority_f1},
                     {"auprc", e.auprc}});
  }
  out["warnings"] = result.warnings;
  write_file(fs::path(out_dir) / (inputs.scenario_name + "_grid.json"), out.dump(2));
  std::cout << "best minority_f1 (inner CV): held-out report written to "
            << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FRF-ACS: functional random forest for imbalanced curve classification"};
  app.require_subcommand(1);

  std::string scenario = "all", out_dir = "out", data_path, config_path;
  int workers = 0;
  bool list = false;

  auto add_workers = [&](CLI::App* cmd) {
    cmd->add_option("--workers", workers, "worker threads for tree fitting")
        ->envname("FRFACS_WORKERS");
  };

  auto* sim = app.add_subcommand("simulate", "emit synthetic scenario datasets");
  sim->add_option("--scenario", scenario, "scenario name or 'all'")
      ->envname("FRFACS_SCENARIO");
  sim->add_option("--out", out_dir, "output directory")->envname("FRFACS_OUT");
  sim->add_flag("--list", list, "list scenario names and exit");

  auto* train = app.add_subcommand("train", "fit a model on a CSV dataset");
  train->add_option("--data", data_path, "wide CSV dataset")
      ->required()
      ->envname("FRFACS_DATA");
  train->add_option("--config", config_path, "model config JSON")
      ->envname("FRFACS_CONFIG");
  train->add_option("--out", out_dir, "output directory")->envname("FRFACS_OUT");
  add_workers(train);

  auto* cv = app.add_subcommand("cv", "repeated stratified cross-validation");
  cv->add_option("--config", config_path, "experiment config JSON")
      ->required()
      ->envname("FRFACS_CONFIG");
  add_workers(cv);

  auto* ablate = app.add_subcommand("ablate", "component ablation comparison");
  ablate->add_option("--config", config_path, "experiment config JSON")
      ->required()
      ->envname("FRFACS_CONFIG");
  add_workers(ablate);

  auto* grid = app.add_subcommand("grid", "grid search with held-out evaluation");
  grid->add_option("--config", config_path, "experiment config JSON")
      ->required()
      ->envname("FRFACS_CONFIG");
  add_workers(grid);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(scenario, out_dir, list);
    if (train->parsed()) return cmd_train(data_path, config_path, out_dir, workers);
    if (cv->parsed()) return cmd_cv(config_path, workers);
    if (ablate->parsed()) return cmd_ablate(config_path, workers);
    if (grid->parsed()) return cmd_grid(config_path, workers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
