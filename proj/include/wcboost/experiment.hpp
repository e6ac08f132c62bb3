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

// Experiment harness: config-driven (dataset, method, theta, seed) sweeps with
// content-addressed per-run JSON, seed-mean aggregate tables, validation-based
// theta selection, and plot-ready boundary and weight-trajectory exports.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wcboost/booster.hpp"
#include "wcboost/core.hpp"
#include "wcboost/datasets.hpp"
#include "wcboost/errors.hpp"
#include "wcboost/hedge.hpp"
#include "wcboost/weak_learners.hpp"

namespace wcboost {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class Method { kWorstClassBoost, kAverageBoost, kPlainTree };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kWorstClassBoost: return "worstclass_boost";
    case Method::kAverageBoost: return "average_boost";
    case Method::kPlainTree: return "plain_tree";
  }
  return "unknown";
}

inline Method method_from_string(std::string_view s) {
  if (s == "worstclass_boost") return Method::kWorstClassBoost;
  if (s == "average_boost") return Method::kAverageBoost;
  if (s == "plain_tree") return Method::kPlainTree;
  throw_config("unknown method '" + std::string(s) + "'");
}

// Only the worst-class booster consumes theta during training, so only it is
// swept over the theta grid; the other methods run once per seed.
inline bool sweeps_theta(Method m) { return m == Method::kWorstClassBoost; }

struct MethodConfig {
  Method method = Method::kWorstClassBoost;
  BoostConfig boost;
  int max_depth = 6;
};

struct DatasetConfig {
  // balanced_toy | imbalanced_toy | blobs | files
  std::string generator = "balanced_toy";
  std::vector<std::size_t> min_nk{10, 50, 100};  // imbalanced_toy only
  std::optional<BlobSpec> blobs;                 // blobs only
  std::string train_path;                        // files only
  std::string test_path;                         // files only
  std::optional<int> num_classes;                // files only

  void validate() const {
    if (generator == "balanced_toy") return;
    if (generator == "imbalanced_toy") {
      if (min_nk.empty()) throw_config("imbalanced_toy needs at least one min_nk");
      for (auto m : min_nk) {
        if (m < 1) throw_config("min_nk must be at least 1");
      }
      return;
    }
    if (generator == "blobs") {
      if (!blobs) throw_config("blobs generator needs a 'spec'");
      blobs->validate();
      return;
    }
    if (generator == "files") {
      if (train_path.empty() || test_path.empty()) {
        throw_config("files dataset needs 'train' and 'test' paths");
      }
      return;
    }
    throw_config("unknown dataset generator '" + generator + "'");
  }

  // One entry per dataset variant; the imbalanced generator yields one per
  // min_nk value.
  std::size_t variant_count() const {
    return generator == "imbalanced_toy" ? min_nk.size() : 1;
  }

  std::string variant_label(std::size_t v) const {
    if (generator == "imbalanced_toy") {
      return "imbalanced_toy:min_nk=" + std::to_string(min_nk.at(v));
    }
    return generator;
  }

  DatasetSplit materialize(std::size_t v, std::uint64_t seed) const {
    if (generator == "balanced_toy") return gen_balanced_toy(seed);
    if (generator == "imbalanced_toy") return gen_imbalanced_toy(min_nk.at(v), seed);
    if (generator == "blobs") return generate_blobs(*blobs, seed);
    if (generator == "files") {
      auto train = load_dataset(train_path, num_classes);
      auto test = load_dataset(test_path, train.num_classes());
      return DatasetSplit{std::move(train), std::move(test)};
    }
    throw_config("unknown dataset generator '" + generator + "'");
  }

  // Variant-specific description hashed into the run key.
  json variant_json(std::size_t v) const {
    json j{{"generator", generator}};
    if (generator == "imbalanced_toy") j["min_nk"] = min_nk.at(v);
    if (generator == "blobs") j["spec"] = *blobs;
    if (generator == "files") {
      j["train"] = train_path;
      j["test"] = test_path;
      j["num_classes"] = num_classes ? json(*num_classes) : json("auto");
    }
    return j;
  }
};

inline void to_json(json& j, const DatasetConfig& d) {
  j = json{{"generator", d.generator}};
  if (d.generator == "imbalanced_toy") j["min_nk"] = d.min_nk;
  if (d.generator == "blobs" && d.blobs) j["spec"] = *d.blobs;
  if (d.generator == "files") {
    j["train"] = d.train_path;
    j["test"] = d.test_path;
    j["num_classes"] = d.num_classes ? json(*d.num_classes) : json("auto");
  }
}

inline void from_json(const json& j, DatasetConfig& d) {
  d = DatasetConfig{};
  if (j.is_string()) {
    d.generator = j.get<std::string>();
    return;
  }
  d.generator = j.value("generator", d.generator);
  if (j.contains("min_nk")) j.at("min_nk").get_to(d.min_nk);
  if (j.contains("spec")) d.blobs = j.at("spec").get<BlobSpec>();
  d.train_path = j.value("train", std::string{});
  d.test_path = j.value("test", std::string{});
  if (j.contains("num_classes") && !j.at("num_classes").is_string()) {
    d.num_classes = j.at("num_classes").get<int>();
  }
}

inline std::vector<double> default_theta_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  return grid;
}

struct ExperimentConfig {
  DatasetConfig dataset;
  std::vector<MethodConfig> methods{{Method::kWorstClassBoost, {}, 6},
                                    {Method::kAverageBoost, {}, 6}};
  std::vector<double> theta_grid = default_theta_grid();
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  // When set, each training set is split stratified into train:validation
  // (ratio = validation share) and validation errors are recorded.
  std::optional<double> validation_ratio;
  std::string output_dir = "wcboost_out";
  bool save_models = false;
  std::size_t jobs = 1;

  void validate() const {
    dataset.validate();
    if (methods.empty()) throw_config("method list is empty");
    for (const auto& m : methods) {
      m.boost.validate();
      if (m.max_depth < 1) throw_config("max_depth must be at least 1");
    }
    if (theta_grid.empty()) throw_config("theta grid is empty");
    for (double t : theta_grid) {
      if (!(t >= 0.0 && t < 1.0)) throw_config("theta grid values must lie in [0, 1)");
    }
    if (seeds.empty()) throw_config("seed list is empty");
    if (validation_ratio && !(*validation_ratio > 0.0 && *validation_ratio < 1.0)) {
      throw_config("validation ratio must lie in (0, 1)");
    }
    if (output_dir.empty()) throw_config("output directory is empty");
    if (jobs < 1) throw_config("jobs must be at least 1");
  }
};

inline void to_json(json& j, const MethodConfig& m) {
  j = json{{"name", to_string(m.method)}, {"boost", m.boost}, {"max_depth", m.max_depth}};
}

inline void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"dataset", c.dataset},
           {"methods", c.methods},
           {"theta_grid", c.theta_grid},
           {"seeds", c.seeds},
           {"validation_ratio", c.validation_ratio ? json(*c.validation_ratio) : json(nullptr)},
           {"output_dir", c.output_dir},
           {"save_models", c.save_models},
           {"jobs", c.jobs}};
}

// Missing keys keep their defaults. A method entry is either a name or an
// object {"name", "boost", "max_depth"}; its boost settings are layered over
// the top-level "boost" object, which is layered over BoostConfig defaults.
inline void from_json(const json& j, ExperimentConfig& c) {
  c = ExperimentConfig{};
  if (j.contains("dataset")) j.at("dataset").get_to(c.dataset);
  json shared_boost = json::object();
  if (j.contains("boost")) shared_boost = j.at("boost");
  const int shared_depth = j.value("max_depth", 6);
  auto method_entry = [&](const json& e) {
    MethodConfig m;
    json boost = shared_boost;
    if (e.is_string()) {
      m.method = method_from_string(e.get<std::string>());
      m.max_depth = shared_depth;
    } else {
      m.method = method_from_string(e.at("name").get<std::string>());
      m.max_depth = e.value("max_depth", shared_depth);
      if (e.contains("boost")) boost.update(e.at("boost"));
    }
    m.boost = boost.get<BoostConfig>();
    return m;
  };
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& e : j.at("methods")) c.methods.push_back(method_entry(e));
  } else {
    for (auto& m : c.methods) m = method_entry(json(std::string(to_string(m.method))));
  }
  if (j.contains("theta_grid")) j.at("theta_grid").get_to(c.theta_grid);
  if (j.contains("seeds")) j.at("seeds").get_to(c.seeds);
  if (j.contains("validation_ratio") && !j.at("validation_ratio").is_null()) {
    c.validation_ratio = j.at("validation_ratio").get<double>();
  }
  c.output_dir = j.value("output_dir", c.output_dir);
  c.save_models = j.value("save_models", c.save_models);
  c.jobs = j.value("jobs", c.jobs);
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, "invalid config JSON: " + std::string(e.what()));
  }
  try {
    auto c = j.get<ExperimentConfig>();
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, "invalid config: " + std::string(e.what()));
  }
}

// ---------------------------------------------------------------------------
// Cells and content addressing
// ---------------------------------------------------------------------------

// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

struct Cell {
  std::size_t variant = 0;
  std::size_t method = 0;
  std::optional<std::size_t> theta_index;  // unset for theta-free methods
  std::size_t seed_index = 0;
};

// Cells in aggregation order: variant, method, theta, seed.
inline std::vector<Cell> enumerate_cells(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (std::size_t v = 0; v < c.dataset.variant_count(); ++v) {
    for (std::size_t m = 0; m < c.methods.size(); ++m) {
      const bool sweep = sweeps_theta(c.methods[m].method);
      const std::size_t n_theta = sweep ? c.theta_grid.size() : 1;
      for (std::size_t t = 0; t < n_theta; ++t) {
        for (std::size_t s = 0; s < c.seeds.size(); ++s) {
          cells.push_back(Cell{v, m, sweep ? std::optional<std::size_t>(t) : std::nullopt, s});
        }
      }
    }
  }
  return cells;
}

// Effective per-cell settings; everything that influences the result.
inline BoostConfig cell_boost_config(const ExperimentConfig& c, const Cell& cell) {
  BoostConfig b = c.methods.at(cell.method).boost;
  if (cell.theta_index) b.theta = c.theta_grid.at(*cell.theta_index);
  b.seed = c.seeds.at(cell.seed_index);
  return b;
}

inline json cell_identity(const ExperimentConfig& c, const Cell& cell) {
  const auto& m = c.methods.at(cell.method);
  return json{{"dataset", c.dataset.variant_json(cell.variant)},
              {"method", to_string(m.method)},
              {"boost", cell_boost_config(c, cell)},
              {"max_depth", m.max_depth},
              {"seed", c.seeds.at(cell.seed_index)},
              {"validation_ratio",
               c.validation_ratio ? json(*c.validation_ratio) : json(nullptr)}};
}

inline std::string run_key(const json& identity) {
  return hex64(fnv1a64(identity.dump()));
}

inline std::filesystem::path run_path(const ExperimentConfig& c, const Cell& cell) {
  return std::filesystem::path(c.output_dir) / "runs" /
         ("run_" + run_key(cell_identity(c, cell)) + ".json");
}

// Write to a sibling temporary file, then rename over the target.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  auto tmp = path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorKind::kIo, "cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) throw Error(ErrorKind::kIo, "write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, "invalid JSON in '" + path.string() + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Single runs
// ---------------------------------------------------------------------------

inline BoostResult train_method(const MethodConfig& method, const BoostConfig& boost,
                                const LabeledDataset& train) {
  switch (method.method) {
    case Method::kWorstClassBoost: {
      TreeLearner learner(method.max_depth, boost.check());
      return run_worstclass_boost(train, learner, boost);
    }
    case Method::kAverageBoost: {
      TreeLearner learner(method.max_depth, boost.check());
      return run_average_boost(train, learner, boost);
    }
    case Method::kPlainTree:
      return train_plain_tree(train, method.max_depth, boost);
  }
  throw_config("unknown method");
}

inline json error_json(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return json{{"kind", to_string(err->kind())}, {"message", err->what()}};
  }
  return json{{"kind", "InternalError"}, {"message", e.what()}};
}

// Runs one cell and returns its run document. Failures are captured in the
// document ("status": "failed") rather than thrown.
inline json execute_cell(const ExperimentConfig& c, const Cell& cell) {
  const auto& method = c.methods.at(cell.method);
  const BoostConfig boost = cell_boost_config(c, cell);
  const json identity = cell_identity(c, cell);
  json doc{{"key", run_key(identity)},
           {"identity", identity},
           {"dataset_label", c.dataset.variant_label(cell.variant)},
           {"method", to_string(method.method)},
           {"theta", cell.theta_index ? json(boost.theta) : json(nullptr)},
           {"seed", boost.seed}};
  try {
    DatasetSplit split = c.dataset.materialize(cell.variant, boost.seed);
    LabeledDataset train = std::move(split.train);
    std::optional<LabeledDataset> validation;
    if (c.validation_ratio) {
      auto tv = train_validation_split(train, *c.validation_ratio, boost.seed);
      train = std::move(tv.train);
      validation = std::move(tv.test);
    }
    BoostResult result = train_method(method, boost, train);
    const ClassErrorReport test_report = worst_class_error(result.ensemble, split.test);
    doc["status"] = "ok";
    doc["num_classes"] = train.num_classes();
    doc["planned_rounds"] = result.planned_rounds;
    doc["rounds"] = result.log.size();
    doc["ensemble_size"] = result.ensemble.size();
    doc["eta"] = result.eta;
    doc["stop_reason"] = to_string(result.stop_reason);
    doc["train"] = result.train_report;
    doc["test"] = test_report;
    doc["validation"] = validation
                            ? json(worst_class_error(result.ensemble, *validation))
                            : json(nullptr);
    doc["log"] = result.log;
    if (method.method == Method::kWorstClassBoost) {
      doc["theorem1"] = theorem1_report_to_json(theorem1_precondition_report(result));
    }
    if (c.save_models) doc["model"] = boost_result_to_json(result);
  } catch (const std::exception& e) {
    doc["status"] = "failed";
    doc["error"] = error_json(e);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

struct AggregateRow {
  std::string dataset;
  std::string method;
  std::optional<double> theta;
  std::size_t runs = 0;
  std::size_t failed = 0;
  std::vector<double> train_class_error;  // mean per class
  double train_worst = 0.0;
  double test_worst = 0.0;
  double test_average = 0.0;
  std::optional<double> validation_worst;
};

// Rows follow cell order; each mean sums successful runs in seed order.
inline std::vector<AggregateRow> aggregate_runs(const ExperimentConfig& c,
                                                std::span<const json> docs) {
  const auto cells = enumerate_cells(c);
  if (docs.size() != cells.size()) throw_contract("one run document per cell expected");
  std::vector<AggregateRow> rows;
  std::size_t i = 0;
  while (i < cells.size()) {
    const Cell& head = cells[i];
    AggregateRow row;
    row.dataset = c.dataset.variant_label(head.variant);
    row.method = std::string(to_string(c.methods[head.method].method));
    if (head.theta_index) row.theta = c.theta_grid[*head.theta_index];
    double train_worst = 0.0;
    double test_worst = 0.0;
    double test_avg = 0.0;
    double val_worst = 0.0;
    bool all_validation = true;
    for (std::size_t s = 0; s < c.seeds.size(); ++s, ++i) {
      const json& d = docs[i];
      if (d.at("status") != "ok") {
        ++row.failed;
        continue;
      }
      ++row.runs;
      const auto train = d.at("train").get<ClassErrorReport>();
      const auto test = d.at("test").get<ClassErrorReport>();
      if (row.train_class_error.size() < train.per_class_error.size()) {
        row.train_class_error.resize(train.per_class_error.size(), 0.0);
      }
      for (std::size_t k = 0; k < train.per_class_error.size(); ++k) {
        row.train_class_error[k] += train.per_class_error[k];
      }
      train_worst += train.worst_class_error;
      test_worst += test.worst_class_error;
      test_avg += test.average_error;
      if (d.at("validation").is_null()) {
        all_validation = false;
      } else {
        val_worst += d.at("validation").at("worst_class_error").get<double>();
      }
    }
    if (row.runs > 0) {
      const auto n = static_cast<double>(row.runs);
      for (double& e : row.train_class_error) e /= n;
      row.train_worst = train_worst / n;
      row.test_worst = test_worst / n;
      row.test_average = test_avg / n;
      if (all_validation) row.validation_worst = val_worst / n;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_aggregate_csv(std::ostream& os, std::span<const AggregateRow> rows) {
  std::size_t k_max = 0;
  for (const auto& r : rows) k_max = std::max(k_max, r.train_class_error.size());
  os << "dataset,method,theta,runs,failed";
  for (std::size_t k = 0; k < k_max; ++k) os << ",train_class_" << (k + 1);
  os << ",train_worst,test_worst,test_avg,validation_worst\n";
  for (const auto& r : rows) {
    os << r.dataset << ',' << r.method << ',' << (r.theta ? format_double(*r.theta) : "")
       << ',' << r.runs << ',' << r.failed;
    for (std::size_t k = 0; k < k_max; ++k) {
      os << ',';
      if (r.runs > 0 && k < r.train_class_error.size()) os << format_double(r.train_class_error[k]);
    }
    auto cell = [&](double v) {
      os << ',';
      if (r.runs > 0) os << format_double(v);
    };
    cell(r.train_worst);
    cell(r.test_worst);
    cell(r.test_average);
    os << ',' << (r.validation_worst ? format_double(*r.validation_worst) : "") << '\n';
  }
}

// Worst-class test error pivoted with one column per min_nk value; only
// meaningful for the imbalanced generator.
inline void write_min_nk_table(std::ostream& os, const ExperimentConfig& c,
                               std::span<const AggregateRow> rows) {
  if (c.dataset.generator != "imbalanced_toy") {
    throw_config("the min_nk table needs the imbalanced_toy generator");
  }
  const std::size_t n_var = c.dataset.min_nk.size();
  if (rows.size() % n_var != 0) throw_contract("aggregate rows do not tile the variants");
  const std::size_t per_variant = rows.size() / n_var;
  os << "method,theta";
  for (auto m : c.dataset.min_nk) os << ",min_nk=" << m;
  os << '\n';
  for (std::size_t r = 0; r < per_variant; ++r) {
    const auto& head = rows[r];
    os << head.method << ',' << (head.theta ? format_double(*head.theta) : "");
    for (std::size_t v = 0; v < n_var; ++v) {
      const auto& row = rows[v * per_variant + r];
      os << ',';
      if (row.runs > 0) os << format_double(row.test_worst);
    }
    os << '\n';
  }
}

struct ExperimentOutcome {
  std::vector<json> runs;  // cell order
  std::vector<AggregateRow> rows;
  std::size_t reused = 0;
  std::size_t failed = 0;
  std::filesystem::path aggregate_path;
  std::optional<std::filesystem::path> table_path;
};

namespace detail {

inline void write_tables(const ExperimentConfig& c, ExperimentOutcome& out) {
  const std::filesystem::path dir(c.output_dir);
  std::ostringstream agg;
  write_aggregate_csv(agg, out.rows);
  out.aggregate_path = dir / "aggregate.csv";
  write_file_atomic(out.aggregate_path, agg.str());
  if (c.dataset.generator == "imbalanced_toy") {
    std::ostringstream table;
    write_min_nk_table(table, c, out.rows);
    out.table_path = dir / "table.csv";
    write_file_atomic(*out.table_path, table.str());
  }
}

}  // namespace detail

// Runs every cell not already present on disk, then writes aggregate.csv
// (and table.csv for min_nk sweeps). Cells run on `config.jobs` threads;
// each run file is written atomically, so an interrupted sweep resumes.
inline ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir / "runs");
  write_file_atomic(dir / "config.json", json(config).dump(2) + "\n");

  const auto cells = enumerate_cells(config);
  ExperimentOutcome out;
  out.runs.resize(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> reused{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        const auto path = run_path(config, cells[i]);
        if (std::filesystem::exists(path)) {
          json doc = read_json_file(path);
          if (doc.value("status", "") == "ok") {
            out.runs[i] = std::move(doc);
            ++reused;
            continue;
          }
        }
        out.runs[i] = execute_cell(config, cells[i]);
        write_file_atomic(path, out.runs[i].dump() + "\n");
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(config.jobs, std::max<std::size_t>(cells.size(), 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  out.reused = reused;
  for (const auto& d : out.runs) {
    if (d.at("status") != "ok") ++out.failed;
  }
  out.rows = aggregate_runs(config, out.runs);
  detail::write_tables(config, out);
  return out;
}

struct StoredExperiment {
  ExperimentConfig config;
  std::vector<json> runs;  // cell order
};

// Reads config.json and every run file of a finished sweep.
inline StoredExperiment load_experiment(const std::string& output_dir) {
  const std::filesystem::path dir(output_dir);
  StoredExperiment stored;
  try {
    stored.config = read_json_file(dir / "config.json").get<ExperimentConfig>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, "invalid stored config: " + std::string(e.what()));
  }
  stored.config.output_dir = output_dir;
  stored.config.validate();
  for (const auto& cell : enumerate_cells(stored.config)) {
    const auto path = run_path(stored.config, cell);
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorKind::kIo, "missing run file '" + path.string() + "'");
    }
    stored.runs.push_back(read_json_file(path));
  }
  return stored;
}

// Rebuilds the tables from the run files of a finished sweep. The output is
// byte-identical to what run_experiment wrote.
inline ExperimentOutcome report_experiment(const std::string& output_dir) {
  auto stored = load_experiment(output_dir);
  ExperimentOutcome out;
  out.runs = std::move(stored.runs);
  for (const auto& d : out.runs) {
    if (d.at("status") != "ok") ++out.failed;
  }
  out.rows = aggregate_runs(stored.config, out.runs);
  detail::write_tables(stored.config, out);
  return out;
}

// ---------------------------------------------------------------------------
// Theta selection
// ---------------------------------------------------------------------------

struct ThetaCandidate {
  double theta = 0.0;
  // Worst-class error on the validation split; unset when the run had none.
  std::optional<double> validation_worst_error;
};

// The theta with the smallest worst-class validation error; ties go to the
// larger theta (tighter training bound). Test data never enters here.
inline double select_theta_by_validation(std::span<const ThetaCandidate> candidates) {
  if (candidates.empty()) throw_config("no theta candidates");
  std::optional<double> best_theta;
  double best_error = 0.0;
  for (const auto& c : candidates) {
    if (!c.validation_worst_error) {
      throw_config("theta selection needs a validation split");
    }
    const double e = *c.validation_worst_error;
    if (!best_theta || e < best_error || (e == best_error && c.theta > *best_theta)) {
      best_theta = c.theta;
      best_error = e;
    }
  }
  return *best_theta;
}

// Candidates for one (dataset, method, seed) slice of a sweep's run documents.
// Failed runs are skipped.
inline std::vector<ThetaCandidate> theta_candidates(std::span<const json> docs,
                                                    const std::string& dataset,
                                                    const std::string& method,
                                                    std::uint64_t seed) {
  std::vector<ThetaCandidate> out;
  for (const auto& d : docs) {
    if (d.at("status") != "ok" || d.at("theta").is_null()) continue;
    if (d.at("dataset_label") != dataset || d.at("method") != method ||
        d.at("seed").get<std::uint64_t>() != seed) {
      continue;
    }
    ThetaCandidate c{d.at("theta").get<double>(), std::nullopt};
    if (!d.at("validation").is_null()) {
      c.validation_worst_error = d.at("validation").at("worst_class_error").get<double>();
    }
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

struct Box2D {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
};

// Lattice coordinate i of `resolution` evenly spaced points on [lo, hi].
inline double lattice_point(double lo, double hi, std::size_t i, std::size_t resolution) {
  if (resolution == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
}

// CSV `x,y,predicted_class` (1-based class) over a resolution x resolution
// lattice, x varying slowest.
inline std::size_t export_boundary_grid(std::ostream& os, const Ensemble& ensemble,
                                        const Box2D& box, std::size_t resolution) {
  if (ensemble.dim() != 2) {
    throw_dimension("boundary export needs 2-dimensional inputs, got " +
                    std::to_string(ensemble.dim()));
  }
  if (resolution < 1) throw_config("resolution must be at least 1");
  if (!(box.x_min <= box.x_max && box.y_min <= box.y_max)) {
    throw_config("boundary box has min > max");
  }
  os << "x,y,predicted_class\n";
  std::size_t rows = 0;
  std::array<double, 2> p{};
  for (std::size_t i = 0; i < resolution; ++i) {
    p[0] = lattice_point(box.x_min, box.x_max, i, resolution);
    for (std::size_t j = 0; j < resolution; ++j) {
      p[1] = lattice_point(box.y_min, box.y_max, j, resolution);
      os << format_double(p[0]) << ',' << format_double(p[1]) << ','
         << (majority_vote(ensemble, p) + 1) << '\n';
      ++rows;
    }
  }
  return rows;
}

struct WeightTrajectorySummary {
  std::size_t rounds = 0;
  std::vector<double> time_averaged_weights;
  int heaviest_class = 0;  // 0-based, ties -> lowest index
};

inline WeightTrajectorySummary summarize_weight_trajectory(std::span<const RoundRecord> log) {
  if (log.empty()) throw_contract("weight trajectory of an empty log");
  WeightTrajectorySummary s;
  s.rounds = log.size();
  s.time_averaged_weights.assign(log.front().weights.size(), 0.0);
  for (const auto& r : log) {
    if (r.weights.size() != s.time_averaged_weights.size()) {
      throw_contract("weight vectors change length within a log");
    }
    for (std::size_t k = 0; k < r.weights.size(); ++k) s.time_averaged_weights[k] += r.weights[k];
  }
  for (double& w : s.time_averaged_weights) w /= static_cast<double>(log.size());
  s.heaviest_class = argmax_lowest<double>(s.time_averaged_weights);
  return s;
}

// CSV `round,k,weight,feedback` (1-based round and class) of the weights in
// force at each round, followed by the time-average summary.
inline WeightTrajectorySummary export_weight_trajectory(std::ostream& os,
                                                        std::span<const RoundRecord> log) {
  auto summary = summarize_weight_trajectory(log);
  os << "round,k,weight,feedback\n";
  for (const auto& r : log) {
    for (std::size_t k = 0; k < r.weights.size(); ++k) {
      os << r.round << ',' << (k + 1) << ',' << format_double(r.weights[k]) << ','
         << (k < r.feedback.size() ? r.feedback[k] : 0) << '\n';
    }
  }
  return summary;
}

inline void to_json(json& j, const WeightTrajectorySummary& s) {
  j = json{{"rounds", s.rounds},
           {"time_averaged_weights", s.time_averaged_weights},
           {"heaviest_class", s.heaviest_class + 1}};
}

}  // namespace wcboost
