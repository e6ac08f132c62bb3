/*
 * Copyright 2026 The wcboost Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// wcboost command-line tool: data generation, training, evaluation, sweeps,
// theta selection, exports, the generalization-bound calculator, and report
// re-aggregation. Errors are printed to stderr as {"error":{kind,message}}.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wcboost/wcboost.hpp"

namespace {

using wcboost::json;

struct BoostFlags {
  std::optional<double> theta;
  std::optional<double> gamma;
  std::optional<std::size_t> max_rounds;
  std::optional<double> eta;
  std::optional<std::size_t> patience;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App* app) {
    app->add_option("--theta", theta, "Accuracy floor theta in [0, 1)");
    app->add_option("--gamma", gamma, "Weak-learner edge gamma in (0, 1/2)");
    app->add_option("--max-rounds", max_rounds, "Boosting rounds T (default: sufficient)");
    app->add_option("--eta", eta, "Hedge learning rate (default: sqrt(8 ln m / T))");
    app->add_option("--patience", patience, "Rounds of unchanged w.r before stopping");
    app->add_option("--seed", seed, "Random seed");
  }

  void apply(wcboost::BoostConfig& c) const {
    if (theta) c.theta = *theta;
    if (gamma) c.gamma = *gamma;
    if (max_rounds) c.max_rounds = *max_rounds;
    if (eta) c.eta = *eta;
    if (patience) c.patience = *patience;
    if (seed) c.seed = *seed;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  wcboost::write_file_atomic(path, text);
}

wcboost::BoostResult load_model(const std::string& path) {
  json j = wcboost::read_json_file(path);
  // Sweep run documents carry the model under "model".
  if (j.contains("model")) j = j.at("model");
  try {
    return wcboost::boost_result_from_json(j);
  } catch (const json::exception& e) {
    throw wcboost::Error(wcboost::ErrorKind::kParse,
                         "invalid model file '" + path + "': " + e.what());
  }
}

std::vector<wcboost::RoundRecord> load_log(const std::string& path) {
  json j = wcboost::read_json_file(path);
  try {
    if (j.contains("model")) j = j.at("model");
    const json& log = j.contains("rounds") && j.at("rounds").is_array() ? j.at("rounds")
                                                                         : j.at("log");
    return log.get<std::vector<wcboost::RoundRecord>>();
  } catch (const json::exception& e) {
    throw wcboost::Error(wcboost::ErrorKind::kParse,
                         "no round log in '" + path + "': " + e.what());
  }
}

int report_error(const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worst-class boosting toolkit"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic train/test split as CSV");
  std::string gen_dataset = "balanced_toy";
  std::size_t gen_min_nk = 100;
  std::string gen_spec;
  std::uint64_t gen_seed = 0;
  std::string gen_out = ".";
  gen->add_option("--dataset", gen_dataset, "balanced_toy | imbalanced_toy | blobs")
      ->check(CLI::IsMember({"balanced_toy", "imbalanced_toy", "blobs"}));
  gen->add_option("--min-nk", gen_min_nk, "Minority class size for imbalanced_toy");
  gen->add_option("--spec", gen_spec, "Blob spec JSON file for the blobs generator");
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--out", gen_out, "Output directory");

  // train
  auto* train = app.add_subcommand("train", "Train one model and write it as JSON");
  std::string train_data;
  std::string train_method = "worstclass_boost";
  int train_depth = 6;
  std::string train_out = "model.json";
  std::string train_weights;
  BoostFlags train_flags;
  train->add_option("--data", train_data, "Training data (CSV or JSON lines)")->required();
  train->add_option("--method", train_method, "worstclass_boost | average_boost | plain_tree")
      ->check(CLI::IsMember({"worstclass_boost", "average_boost", "plain_tree"}));
  train->add_option("--max-depth", train_depth, "Tree depth limit");
  train->add_option("--out", train_out, "Model output path");
  train->add_option("--weights-csv", train_weights, "Also write the class-weight trajectory");
  train_flags.add_to(train);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Class-wise error report of a model");
  std::string eval_model;
  std::string eval_data;
  std::string eval_out = "-";
  evaluate->add_option("--model", eval_model, "Model JSON")->required();
  evaluate->add_option("--data", eval_data, "Evaluation data")->required();
  evaluate->add_option("--out", eval_out, "Report path ('-' for stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a config-driven experiment sweep");
  std::string sweep_config;
  std::string sweep_out;
  std::vector<std::uint64_t> sweep_seeds;
  std::vector<double> sweep_thetas;
  std::optional<double> sweep_gamma;
  std::optional<std::size_t> sweep_max_rounds;
  std::optional<std::size_t> sweep_jobs;
  sweep->add_option("--config", sweep_config, "Experiment config JSON")->required();
  sweep->add_option("--out", sweep_out, "Override the output directory");
  sweep->add_option("--seed", sweep_seeds, "Override the seed list (repeatable)");
  sweep->add_option("--theta", sweep_thetas, "Override the theta grid (repeatable)");
  sweep->add_option("--gamma", sweep_gamma, "Override gamma for every method");
  sweep->add_option("--max-rounds", sweep_max_rounds, "Override T for every method");
  sweep->add_option("--jobs", sweep_jobs, "Parallel cells");

  // select-theta
  auto* select = app.add_subcommand("select-theta", "Pick theta per seed by validation error");
  std::string select_dir;
  std::string select_method = "worstclass_boost";
  select->add_option("--run-dir", select_dir, "Sweep output directory")->required();
  select->add_option("--method", select_method, "Method whose theta grid is used");

  // export-boundary
  auto* boundary = app.add_subcommand("export-boundary", "Predicted class over a 2-D lattice");
  std::string boundary_model;
  std::size_t boundary_res = 200;
  std::vector<double> boundary_box{-5.0, 5.0, -5.0, 5.0};
  std::string boundary_out = "-";
  boundary->add_option("--model", boundary_model, "Model JSON")->required();
  boundary->add_option("--resolution", boundary_res, "Points per axis");
  boundary->add_option("--box", boundary_box, "x_min x_max y_min y_max")->expected(4);
  boundary->add_option("--out", boundary_out, "CSV path ('-' for stdout)");

  // export-weights
  auto* weights = app.add_subcommand("export-weights", "Class-weight trajectory as CSV");
  std::string weights_model;
  std::string weights_out = "-";
  weights->add_option("--model", weights_model, "Model or run JSON")->required();
  weights->add_option("--out", weights_out, "CSV path ('-' for stdout)");

  // bound
  auto* bound = app.add_subcommand("bound", "Worst-class generalization bound");
  double bound_theta = 0.75;
  double bound_c = 1.0;
  std::size_t bound_n = 0;
  double bound_delta = 0.05;
  bound->add_option("--theta", bound_theta, "Accuracy floor theta");
  bound->add_option("--complexity", bound_c, "Rademacher constant C");
  bound->add_option("--min-class-size", bound_n, "Smallest class size")->required();
  bound->add_option("--delta", bound_delta, "Failure probability");

  // report
  auto* report = app.add_subcommand("report", "Rebuild aggregate tables from run files");
  std::string report_dir;
  report->add_option("--run-dir", report_dir, "Sweep output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("UsageError", e.what(), 2);
  }

  try {
    if (*gen) {
      wcboost::BlobSpec spec;
      if (gen_dataset == "balanced_toy") {
        spec = wcboost::balanced_toy_spec();
      } else if (gen_dataset == "imbalanced_toy") {
        spec = wcboost::imbalanced_toy_spec(gen_min_nk);
      } else {
        if (gen_spec.empty()) wcboost::throw_config("--spec is required for blobs");
        spec = wcboost::read_json_file(gen_spec).get<wcboost::BlobSpec>();
      }
      const auto split = wcboost::generate_blobs(spec, gen_seed);
      const std::filesystem::path dir(gen_out);
      std::filesystem::create_directories(dir);
      wcboost::save_csv(split.train, (dir / "train.csv").string());
      wcboost::save_csv(split.test, (dir / "test.csv").string());
      const json meta{{"dataset", gen_dataset}, {"seed", gen_seed}, {"spec", spec}};
      wcboost::write_file_atomic(dir / "spec.json", meta.dump(2) + "\n");
      std::cout << json{{"train", (dir / "train.csv").string()},
                        {"test", (dir / "test.csv").string()},
                        {"train_size", split.train.size()},
                        {"test_size", split.test.size()}}
                       .dump()
                << '\n';
    } else if (*train) {
      const auto data = wcboost::load_dataset(train_data);
      wcboost::MethodConfig method;
      method.method = wcboost::method_from_string(train_method);
      method.max_depth = train_depth;
      train_flags.apply(method.boost);
      method.boost.validate();
      const auto result = wcboost::train_method(method, method.boost, data);
      write_text(train_out, wcboost::boost_result_to_json(result).dump() + "\n");
      json summary{{"method", result.method},
                   {"rounds", result.log.size()},
                   {"planned_rounds", result.planned_rounds},
                   {"stop_reason", wcboost::to_string(result.stop_reason)},
                   {"train", result.train_report}};
      if (method.method == wcboost::Method::kWorstClassBoost) {
        summary["theorem1"] = wcboost::theorem1_precondition_report(result).summary;
      }
      if (!train_weights.empty() && !result.log.empty()) {
        std::ostringstream csv;
        summary["weights"] = wcboost::export_weight_trajectory(csv, result.log);
        wcboost::write_file_atomic(train_weights, csv.str());
      }
      std::cout << summary.dump() << '\n';
    } else if (*evaluate) {
      const auto model = load_model(eval_model);
      const auto data = wcboost::load_dataset(eval_data, model.ensemble.num_classes());
      const auto rep = wcboost::worst_class_error(model.ensemble, data);
      write_text(eval_out, json(rep).dump() + "\n");
    } else if (*sweep) {
      auto config = wcboost::load_experiment_config(sweep_config);
      if (!sweep_out.empty()) config.output_dir = sweep_out;
      if (!sweep_seeds.empty()) config.seeds = sweep_seeds;
      if (!sweep_thetas.empty()) config.theta_grid = sweep_thetas;
      if (sweep_jobs) config.jobs = *sweep_jobs;
      for (auto& m : config.methods) {
        if (sweep_gamma) m.boost.gamma = *sweep_gamma;
        if (sweep_max_rounds) m.boost.max_rounds = *sweep_max_rounds;
      }
      const auto out = wcboost::run_experiment(config);
      json summary{{"cells", out.runs.size()},
                   {"reused", out.reused},
                   {"failed", out.failed},
                   {"aggregate", out.aggregate_path.string()}};
      if (out.table_path) summary["table"] = out.table_path->string();
      std::cout << summary.dump() << '\n';
    } else if (*select) {
      const auto stored = wcboost::load_experiment(select_dir);
      const auto& config = stored.config;
      json picks = json::array();
      for (std::size_t v = 0; v < config.dataset.variant_count(); ++v) {
        const auto label = config.dataset.variant_label(v);
        for (auto seed : config.seeds) {
          const auto candidates = wcboost::theta_candidates(stored.runs, label, select_method, seed);
          picks.push_back({{"dataset", label},
                           {"seed", seed},
                           {"theta", wcboost::select_theta_by_validation(candidates)}});
        }
      }
      std::cout << json{{"method", select_method}, {"selections", picks}}.dump() << '\n';
    } else if (*boundary) {
      const auto model = load_model(boundary_model);
      std::ostringstream csv;
      const wcboost::Box2D box{boundary_box[0], boundary_box[1], boundary_box[2],
                               boundary_box[3]};
      wcboost::export_boundary_grid(csv, model.ensemble, box, boundary_res);
      write_text(boundary_out, csv.str());
    } else if (*weights) {
      const auto log = load_log(weights_model);
      std::ostringstream csv;
      const auto summary = wcboost::export_weight_trajectory(csv, log);
      write_text(weights_out, csv.str());
      if (!weights_out.empty() && weights_out != "-") {
        std::cout << json(summary).dump() << '\n';
      }
    } else if (*bound) {
      const auto b = wcboost::generalization_bound(bound_theta, bound_c, bound_n, bound_delta);
      std::cout << json(b).dump() << '\n';
    } else if (*report) {
      const auto out = wcboost::report_experiment(report_dir);
      json summary{{"cells", out.runs.size()},
                   {"failed", out.failed},
                   {"aggregate", out.aggregate_path.string()}};
      if (out.table_path) summary["table"] = out.table_path->string();
      std::cout << summary.dump() << '\n';
    }
  } catch (const wcboost::Error& e) {
    return report_error(std::string(wcboost::to_string(e.kind())), e.what(), 1);
  } catch (const json::exception& e) {
    return report_error("ParseError", e.what(), 1);
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error("IoError", e.what(), 1);
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what(), 1);
  }
  return 0;
}
