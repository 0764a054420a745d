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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fpselect/cost.h"
#include "fpselect/dataset.h"
#include "fpselect/error.h"
#include "fpselect/report.h"
#include "fpselect/selection.h"
#include "fpselect/sensitivity.h"
#include "fpselect/synth.h"

namespace py = pybind11;

namespace fpselect {
namespace {

struct SchemaTag {};
struct ConfigTag {};
struct ParseTag {};
struct PreconditionTag {};

AttackerInstance MakeAttacker(const Dataset& dataset, std::size_t beta,
                              const std::string& knowledge,
                              const std::string& pmf_path) {
  switch (ParseKnowledge(knowledge)) {
    case AttackerKnowledge::kPopulation:
      return AttackerInstance::Strongest(dataset, beta);
    case AttackerKnowledge::kUniform:
      return AttackerInstance::Uniform(dataset, beta);
    case AttackerKnowledge::kFile:
      if (pmf_path.empty()) {
        throw Error(ErrorCode::kConfig, "knowledge \"file\" requires pmf");
      }
      return AttackerInstance::FromPmf(LoadPmf(pmf_path, dataset.catalog()),
                                       beta, AttackerKnowledge::kFile);
  }
  throw Error(ErrorCode::kConfig, "unknown knowledge");
}

CostWeights Weights(const std::vector<double>& w) {
  if (w.size() != 3) {
    throw Error(ErrorCode::kConfig, "weights must have three entries");
  }
  return CostWeights(w[0], w[1], w[2]);
}

std::string Select(const Dataset& dataset, double alpha,
                   const std::string& method, std::size_t k, std::size_t beta,
                   const std::string& knowledge, const std::string& pmf,
                   const std::vector<double>& weights, std::size_t threads,
                   std::size_t max_attributes) {
  SelectionConfig config;
  config.alpha = alpha;
  config.k = k;
  config.weights = Weights(weights);
  config.threads = threads;
  config.Validate();
  AttackerInstance attacker = MakeAttacker(dataset, beta, knowledge, pmf);
  DatasetProblem problem(dataset, attacker, config.weights);

  SelectionResult result;
  {
    py::gil_scoped_release release;
    if (method == "greedy") {
      result = SelectGreedy(problem, config);
    } else if (method == "entropy") {
      result = SelectEntropyBaseline(problem, config);
    } else if (method == "cond-entropy") {
      result = SelectCondEntropyBaseline(problem, config);
    } else if (method == "exhaustive") {
      result = SelectExhaustive(problem, config, max_attributes);
    } else {
      throw Error(ErrorCode::kConfig, "unknown method \"" + method + "\"");
    }
  }
  RunInfo info;
  info.method = method;
  info.alpha = alpha;
  info.beta = beta;
  info.k = k;
  info.weights = config.weights;
  info.knowledge = knowledge;
  info.pmf_path = pmf;
  return SelectionReportToJson(result, dataset.catalog(), info, std::nullopt);
}

std::string EvaluateJson(const Dataset& dataset,
                         const std::vector<std::string>& attributes,
                         std::size_t beta, const std::string& knowledge,
                         const std::string& pmf,
                         const std::vector<double>& weights) {
  AttackerInstance attacker = MakeAttacker(dataset, beta, knowledge, pmf);
  CostWeights w = Weights(weights);
  AttributeSet set = dataset.catalog().SetOf(attributes);
  Evaluation evaluation = Evaluate(set, dataset, attacker, w);
  RunInfo info;
  info.method = "evaluate";
  info.beta = beta;
  info.weights = w;
  info.knowledge = knowledge;
  info.pmf_path = pmf;
  return EvaluationToJson(evaluation, set, dataset.catalog(), info);
}

}  // namespace
}  // namespace fpselect

PYBIND11_MODULE(_fpselect, m) {
  using namespace fpselect;
  m.doc() = "Native core of the fpselect package.";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<SchemaTag> schema(m, "SchemaError", error.ptr());
  static py::exception<ConfigTag> config(m, "ConfigError", error.ptr());
  static py::exception<ParseTag> parse(m, "ParseError", error.ptr());
  static py::exception<PreconditionTag> precondition(m, "PreconditionError",
                                                     error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::kSchema:
          schema(e.what());
          break;
        case ErrorCode::kConfig:
          config(e.what());
          break;
        case ErrorCode::kParse:
          parse(e.what());
          break;
        case ErrorCode::kPrecondition:
          precondition(e.what());
          break;
      }
    }
  });

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("attributes",
                             [](const Dataset& d) {
                               return d.catalog().NamesOf(d.catalog().All());
                             })
      .def_property_readonly("num_users", &Dataset::num_users)
      .def("__len__", &Dataset::size)
      .def("to_jsonl",
           [](const Dataset& d) {
             std::ostringstream out;
             WriteDataset(d, out);
             return out.str();
           })
      .def("catalog_json",
           [](const Dataset& d) { return CatalogToJson(d.catalog()); });

  m.def("load_dataset", &LoadDataset, py::arg("dataset"), py::arg("catalog"));
  m.def(
      "synthesize",
      [](const std::string& config_json, std::uint64_t seed) {
        return Synthesize(ParseSynthConfig(config_json), seed);
      },
      py::arg("config_json"), py::arg("seed") = 0);
  m.def(
      "sensitivity",
      [](const Dataset& dataset, const std::vector<std::string>& attributes,
         std::size_t beta, const std::string& knowledge,
         const std::string& pmf) {
        AttackerInstance attacker = MakeAttacker(dataset, beta, knowledge, pmf);
        return Sensitivity(dataset.catalog().SetOf(attributes), attacker,
                           UserMappingOf(dataset), dataset.catalog());
      },
      py::arg("dataset"), py::arg("attributes"), py::arg("beta"),
      py::arg("knowledge"), py::arg("pmf"));
  m.def(
      "cost",
      [](const Dataset& dataset, const std::vector<std::string>& attributes,
         const std::vector<double>& weights) {
        CostModel model(dataset, Weights(weights));
        return CostBreakdownToJson(
            model.Cost(dataset.catalog().SetOf(attributes)));
      },
      py::arg("dataset"), py::arg("attributes"), py::arg("weights"));
  m.def("evaluate", &EvaluateJson, py::arg("dataset"), py::arg("attributes"),
        py::arg("beta"), py::arg("knowledge"), py::arg("pmf"),
        py::arg("weights"));
  m.def("select", &Select, py::arg("dataset"), py::arg("alpha"),
        py::arg("method"), py::arg("k"), py::arg("beta"), py::arg("knowledge"),
        py::arg("pmf"), py::arg("weights"), py::arg("threads"),
        py::arg("max_attributes"));
}
