// Copyright 2026 The fpselect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fpselect: attribute selection for browser-fingerprint authentication.
//
// Exit codes: 0 success, 2 no solution, 3 schema error, 4 bad config.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpselect/cost.h"
#include "fpselect/dataset.h"
#include "fpselect/error.h"
#include "fpselect/matching.h"
#include "fpselect/report.h"
#include "fpselect/selection.h"
#include "fpselect/sensitivity.h"
#include "fpselect/synth.h"

namespace fpselect {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoSolution = 2;
constexpr int kExitSchema = 3;
constexpr int kExitConfig = 4;

struct Options {
  std::string config_path;
  std::string dataset;
  std::string catalog;
  std::string pmf;
  std::string knowledge = "population";
  std::string weights = "1,10,10000";
  std::string method = "entropy";
  std::string attrs;
  std::string out;
  std::string trace_csv;
  std::string csv;
  std::string synth_config;
  std::string catalog_out;
  std::string write_catalog;
  double alpha = 0.015;
  std::size_t beta = 1;
  std::size_t k = 1;
  std::size_t threads = 0;
  std::size_t max_n = 15;
  std::size_t windows = 6;
  std::uint64_t seed = 1;
  bool timing = false;
};

[[noreturn]] void BadConfig(const std::string& message) {
  throw Error(ErrorCode::kConfig, message);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) BadConfig("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) BadConfig("cannot write " + path);
  out << text;
  if (!out) BadConfig("cannot write " + path);
}

// Fills options not given on the command line from a run configuration file.
void ApplyRunConfig(CLI::App& cmd, Options& opt) {
  if (opt.config_path.empty()) return;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(ReadFile(opt.config_path));
  } catch (const nlohmann::json::exception& e) {
    BadConfig(opt.config_path + ": " + e.what());
  }
  if (!doc.is_object()) BadConfig(opt.config_path + ": expected an object");
  auto given = [&](const char* flag) {
    CLI::Option* option = cmd.get_option_no_throw(flag);
    return option != nullptr && option->count() > 0;
  };
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "dataset") {
        if (!given("--dataset")) opt.dataset = value.get<std::string>();
      } else if (key == "catalog") {
        if (!given("--catalog")) opt.catalog = value.get<std::string>();
      } else if (key == "pmf") {
        if (!given("--pmf")) opt.pmf = value.get<std::string>();
      } else if (key == "knowledge") {
        if (!given("--knowledge")) opt.knowledge = value.get<std::string>();
      } else if (key == "weights") {
        if (given("--weights")) continue;
        if (value.is_string()) {
          opt.weights = value.get<std::string>();
        } else {
          auto w = value.get<std::vector<double>>();
          if (w.size() != 3) BadConfig("weights must have three entries");
          CostWeights parsed(w[0], w[1], w[2]);
          std::ostringstream text;
          text.precision(17);
          text << parsed.memory() << "," << parsed.time() << ","
               << parsed.instability();
          opt.weights = text.str();
        }
      } else if (key == "method") {
        if (!given("--method")) opt.method = value.get<std::string>();
      } else if (key == "alpha") {
        if (!given("--alpha")) opt.alpha = value.get<double>();
      } else if (key == "beta") {
        if (!given("--beta")) opt.beta = value.get<std::size_t>();
      } else if (key == "k") {
        if (!given("--k")) opt.k = value.get<std::size_t>();
      } else if (key == "threads") {
        if (!given("--threads")) opt.threads = value.get<std::size_t>();
      } else if (key == "seed") {
        if (!given("--seed")) opt.seed = value.get<std::uint64_t>();
      } else if (key == "max_n") {
        if (!given("--max-n")) opt.max_n = value.get<std::size_t>();
      } else if (key == "windows") {
        if (!given("--windows")) opt.windows = value.get<std::size_t>();
      } else if (key == "out") {
        if (!given("--out")) opt.out = value.get<std::string>();
      } else if (key == "trace_csv") {
        if (!given("--trace-csv")) opt.trace_csv = value.get<std::string>();
      } else {
        BadConfig(opt.config_path + ": unknown key \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    BadConfig(opt.config_path + ": " + e.what());
  }
}

// Environment variables supply default paths.
void ApplyEnvironment(Options& opt) {
  if (opt.dataset.empty()) {
    if (const char* env = std::getenv("FPSELECT_DATASET")) opt.dataset = env;
  }
  if (opt.catalog.empty()) {
    if (const char* env = std::getenv("FPSELECT_CATALOG")) opt.catalog = env;
  }
}

void RequireFile(const std::string& path, const char* what) {
  if (path.empty()) BadConfig(std::string("missing --") + what);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    BadConfig(std::string(what) + " file not found: " + path);
  }
}

Dataset LoadInputs(const Options& opt) {
  RequireFile(opt.dataset, "dataset");
  RequireFile(opt.catalog, "catalog");
  Dataset dataset = LoadDataset(opt.dataset, opt.catalog);
  std::cerr << "fpselect: " << dataset.size() << " observations, "
            << dataset.num_users() << " users, " << dataset.catalog().size()
            << " attributes\n";
  return dataset;
}

AttackerInstance MakeAttacker(const Options& opt, const Dataset& dataset) {
  switch (ParseKnowledge(opt.knowledge)) {
    case AttackerKnowledge::kPopulation:
      return AttackerInstance::Strongest(dataset, opt.beta);
    case AttackerKnowledge::kUniform:
      return AttackerInstance::Uniform(dataset, opt.beta);
    case AttackerKnowledge::kFile:
      RequireFile(opt.pmf, "pmf");
      return AttackerInstance::FromPmf(LoadPmf(opt.pmf, dataset.catalog()),
                                       opt.beta, AttackerKnowledge::kFile);
  }
  BadConfig("unknown knowledge");
}

RunInfo MakeRunInfo(const Options& opt, std::string method) {
  RunInfo info;
  info.method = std::move(method);
  info.alpha = opt.alpha;
  info.beta = opt.beta;
  info.k = opt.k;
  info.weights = CostWeights::Parse(opt.weights);
  info.seed = opt.seed;
  info.knowledge = opt.knowledge;
  info.dataset_path = opt.dataset;
  info.catalog_path = opt.catalog;
  if (ParseKnowledge(opt.knowledge) == AttackerKnowledge::kFile) {
    info.pmf_path = opt.pmf;
  }
  return info;
}

int RunSelection(const Options& opt, SelectionMethod method) {
  SelectionConfig config;
  config.alpha = opt.alpha;
  config.k = opt.k;
  config.weights = CostWeights::Parse(opt.weights);
  config.threads = opt.threads;
  config.Validate();
  RunInfo info = MakeRunInfo(opt, std::string(MethodName(method)));

  Dataset dataset = LoadInputs(opt);
  AttackerInstance attacker = MakeAttacker(opt, dataset);
  DatasetProblem problem(dataset, attacker, config.weights);

  auto start = std::chrono::steady_clock::now();
  SelectionResult result;
  switch (method) {
    case SelectionMethod::kGreedy:
      result = SelectGreedy(problem, config);
      break;
    case SelectionMethod::kEntropy:
      result = SelectEntropyBaseline(problem, config);
      break;
    case SelectionMethod::kCondEntropy:
      result = SelectCondEntropyBaseline(problem, config);
      break;
    case SelectionMethod::kExhaustive:
      result = SelectExhaustive(problem, config, opt.max_n);
      break;
  }
  std::optional<double> runtime_ms;
  if (opt.timing) {
    runtime_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  }
  WriteOutput(opt.out, SelectionReportToJson(result, dataset.catalog(), info,
                                             runtime_ms));
  if (!opt.trace_csv.empty()) {
    WriteOutput(opt.trace_csv, TraceToCsv(result, dataset.catalog()));
  }
  if (!result.solution_found) {
    std::cerr << "fpselect: no solution: s(A) = " << result.full_sensitivity
              << " exceeds alpha = " << opt.alpha << "\n";
    return kExitNoSolution;
  }
  std::cerr << "fpselect: " << result.chosen.size() << " attributes, cost "
            << result.measurement.cost.total_points << ", sensitivity "
            << result.measurement.sensitivity << ", explored "
            << result.explored_count << "\n";
  return kExitOk;
}

int RunEvaluate(const Options& opt) {
  CostWeights weights = CostWeights::Parse(opt.weights);
  RunInfo info = MakeRunInfo(opt, "evaluate");
  Dataset dataset = LoadInputs(opt);
  std::vector<std::string> names;
  std::stringstream list(opt.attrs);
  for (std::string name; std::getline(list, name, ',');) {
    if (!name.empty()) names.push_back(name);
  }
  AttributeSet attributes = dataset.catalog().SetOf(names);
  AttackerInstance attacker = MakeAttacker(opt, dataset);
  Evaluation evaluation = Evaluate(attributes, dataset, attacker, weights);
  WriteOutput(opt.out,
              EvaluationToJson(evaluation, attributes, dataset.catalog(), info));
  if (!opt.csv.empty()) {
    WriteOutput(opt.csv,
                EvaluationToCsv(evaluation, attributes, dataset.catalog()));
  }
  return kExitOk;
}

int RunCalibrate(const Options& opt) {
  Dataset dataset = LoadInputs(opt);
  CalibrationOptions options;
  options.windows = opt.windows;
  options.seed = opt.seed;
  CalibrationReport report = CalibrateThresholds(dataset, options);
  WriteOutput(opt.out, CalibrationReportToJson(report));
  if (!opt.write_catalog.empty()) {
    WriteOutput(opt.write_catalog,
                CatalogToJson(ApplyCalibration(dataset.catalog(), report)));
  }
  return kExitOk;
}

int RunSynth(const Options& opt) {
  RequireFile(opt.synth_config, "config");
  SynthConfig config = ParseSynthConfig(ReadFile(opt.synth_config));
  Dataset dataset = Synthesize(config, opt.seed);
  std::ostringstream rows;
  WriteDataset(dataset, rows);
  WriteOutput(opt.out, rows.str());
  if (!opt.catalog_out.empty()) {
    WriteOutput(opt.catalog_out, CatalogToJson(dataset.catalog()));
  }
  std::cerr << "fpselect: synthesized " << dataset.size() << " observations of "
            << dataset.num_users() << " browsers\n";
  return kExitOk;
}

int RunStats(const Options& opt) {
  CostWeights weights = CostWeights::Parse(opt.weights);
  Dataset dataset = LoadInputs(opt);
  AttributeCostStats stats = ComputeAttributeCostStats(dataset, weights);
  WriteOutput(opt.out, AttributeCostStatsToJson(stats));
  if (!opt.csv.empty()) WriteOutput(opt.csv, AttributeCostStatsToCsv(stats));
  return kExitOk;
}

void AddInputs(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "Run configuration (JSON)");
  cmd->add_option("--dataset", opt.dataset,
                  "Observations, JSON Lines (env FPSELECT_DATASET)");
  cmd->add_option("--catalog", opt.catalog,
                  "Attribute catalog, JSON (env FPSELECT_CATALOG)");
}

void AddAttacker(CLI::App* cmd, Options& opt) {
  cmd->add_option("--beta", opt.beta, "Dictionary size");
  cmd->add_option("--knowledge", opt.knowledge,
                  "Attacker knowledge: population, uniform or file");
  cmd->add_option("--pmf", opt.pmf, "Attacker distribution for --knowledge file");
  cmd->add_option("--weights", opt.weights, "Cost weights: memory,time,instability");
  cmd->add_option("--seed", opt.seed, "Seed recorded in the report");
}

void AddSearch(CLI::App* cmd, Options& opt) {
  AddInputs(cmd, opt);
  AddAttacker(cmd, opt);
  cmd->add_option("--alpha", opt.alpha, "Sensitivity threshold");
  cmd->add_option("--k", opt.k, "Explored paths");
  cmd->add_option("--threads", opt.threads, "Worker cap, 0 for all cores");
  cmd->add_option("--out", opt.out, "Report path (default stdout)");
  cmd->add_option("--trace-csv", opt.trace_csv, "Trace or steps as CSV");
  cmd->add_flag("--timing", opt.timing, "Record runtime_ms in the report");
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema:
    case ErrorCode::kParse:
      return kExitSchema;
    case ErrorCode::kConfig:
    case ErrorCode::kPrecondition:
      return kExitConfig;
  }
  return kExitConfig;
}

int Main(int argc, char** argv) {
  CLI::App app{"Attribute selection for browser fingerprinting"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* select = app.add_subcommand("select", "Greedy lattice search");
  AddSearch(select, opt);

  CLI::App* baseline =
      app.add_subcommand("baseline", "Entropy-ranked forward selection");
  AddSearch(baseline, opt);
  baseline->add_option("--method", opt.method, "entropy or cond-entropy")
      ->check(CLI::IsMember({"entropy", "cond-entropy"}));

  CLI::App* oracle = app.add_subcommand("oracle", "Exhaustive optimum");
  AddSearch(oracle, opt);
  oracle->add_option("--max-n", opt.max_n, "Largest catalog to enumerate");

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Cost and sensitivity of one set");
  AddInputs(evaluate, opt);
  AddAttacker(evaluate, opt);
  evaluate->add_option("--attrs", opt.attrs, "Comma-separated attributes")
      ->required();
  evaluate->add_option("--out", opt.out, "Report path (default stdout)");
  evaluate->add_option("--csv", opt.csv, "Also write a CSV row");

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Matching thresholds from the dataset");
  AddInputs(calibrate, opt);
  calibrate->add_option("--windows", opt.windows, "Time windows");
  calibrate->add_option("--seed", opt.seed, "Negative-pair sampling seed");
  calibrate->add_option("--out", opt.out, "Report path (default stdout)");
  calibrate->add_option("--write-catalog", opt.write_catalog,
                        "Catalog with calibrated thresholds");

  CLI::App* synth = app.add_subcommand("synth", "Synthetic dataset");
  synth->add_option("--config", opt.synth_config, "Generator configuration")
      ->required();
  synth->add_option("--seed", opt.seed, "Generator seed");
  synth->add_option("--out", opt.out, "Dataset path (default stdout)");
  synth->add_option("--catalog-out", opt.catalog_out, "Catalog path");

  CLI::App* stats = app.add_subcommand("stats", "Per-attribute cost table");
  AddInputs(stats, opt);
  stats->add_option("--weights", opt.weights, "Cost weights");
  stats->add_option("--out", opt.out, "Report path (default stdout)");
  stats->add_option("--csv", opt.csv, "Also write CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (cmd != synth) ApplyRunConfig(*cmd, opt);
    ApplyEnvironment(opt);
    if (cmd == select) return RunSelection(opt, SelectionMethod::kGreedy);
    if (cmd == baseline) {
      return RunSelection(opt, opt.method == "entropy"
                                   ? SelectionMethod::kEntropy
                                   : SelectionMethod::kCondEntropy);
    }
    if (cmd == oracle) return RunSelection(opt, SelectionMethod::kExhaustive);
    if (cmd == evaluate) return RunEvaluate(opt);
    if (cmd == calibrate) return RunCalibrate(opt);
    if (cmd == synth) return RunSynth(opt);
    if (cmd == stats) return RunStats(opt);
  } catch (const Error& e) {
    std::cerr << "fpselect: error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "fpselect: error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace
}  // namespace fpselect

int main(int argc, char** argv) { return fpselect::Main(argc, argv); }
