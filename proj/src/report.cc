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

#include "fpselect/report.h"

#include <cmath>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace fpselect {

namespace {

using nlohmann::json;

json Number(double x) {
  if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
  if (std::isnan(x)) return json(nullptr);
  return json(x);
}

json Breakdown(const CostBreakdown& cost) {
  return {{"memory_bytes", cost.memory_bytes},
          {"time_ms", cost.time_ms},
          {"instability_changes", cost.instability_changes},
          {"total_points", cost.total_points}};
}

json Names(const AttributeCatalog& catalog, const AttributeSet& set) {
  return json(catalog.NamesOf(set));
}

json SetList(const AttributeCatalog& catalog,
             const std::vector<AttributeSet>& sets) {
  json out = json::array();
  for (const AttributeSet& set : sets) out.push_back(Names(catalog, set));
  return out;
}

json Config(const RunInfo& info) {
  return {{"method", info.method},
          {"alpha", info.alpha},
          {"beta", info.beta},
          {"k", info.k},
          {"weights",
           {info.weights.memory(), info.weights.time(),
            info.weights.instability()}},
          {"seed", info.seed},
          {"knowledge", info.knowledge},
          {"dataset", info.dataset_path},
          {"catalog", info.catalog_path},
          {"pmf", info.pmf_path.empty() ? json(nullptr) : json(info.pmf_path)}};
}

std::string JoinNames(const AttributeCatalog& catalog,
                      const AttributeSet& set) {
  std::string out;
  for (const std::string& name : catalog.NamesOf(set)) {
    if (!out.empty()) out += ";";
    out += name;
  }
  return out;
}

std::string FormatDouble(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string SelectionReportToJson(const SelectionResult& result,
                                  const AttributeCatalog& catalog,
                                  const RunInfo& info,
                                  std::optional<double> runtime_ms) {
  json trace = json::array();
  for (const StageSnapshot& stage : result.trace) {
    trace.push_back({{"stage", stage.stage},
                     {"expanded", SetList(catalog, stage.expanded)},
                     {"satisfying", SetList(catalog, stage.satisfying)},
                     {"to_expand", SetList(catalog, stage.to_expand)},
                     {"pruned", SetList(catalog, stage.pruned)},
                     {"min_cost", Number(stage.min_cost)}});
  }
  json steps = json::array();
  for (const BaselineStep& step : result.steps) {
    steps.push_back({{"attribute", catalog[step.attribute].name},
                     {"score", step.score},
                     {"sensitivity", step.sensitivity},
                     {"cost", step.cost}});
  }
  json doc;
  doc["status"] = result.solution_found ? "ok" : "no_solution";
  if (result.solution_found) {
    doc["chosen"] = Names(catalog, result.chosen);
    doc["cost_breakdown"] = Breakdown(result.measurement.cost);
    doc["sensitivity"] = result.measurement.sensitivity;
  } else {
    doc["chosen"] = nullptr;
    doc["cost_breakdown"] = nullptr;
    doc["sensitivity"] = nullptr;
  }
  doc["full_sensitivity"] = result.full_sensitivity;
  doc["explored_count"] = result.explored_count;
  doc["trace"] = std::move(trace);
  doc["steps"] = std::move(steps);
  doc["runtime_ms"] = runtime_ms ? json(*runtime_ms) : json(nullptr);
  doc["config"] = Config(info);
  return doc.dump(2) + "\n";
}

std::string TraceToCsv(const SelectionResult& result,
                       const AttributeCatalog& catalog) {
  std::string out;
  if (result.method == SelectionMethod::kGreedy) {
    out = "stage,collection,attributes,min_cost\n";
    for (const StageSnapshot& stage : result.trace) {
      auto emit = [&](const char* name, const std::vector<AttributeSet>& sets) {
        for (const AttributeSet& set : sets) {
          out += std::to_string(stage.stage) + "," + name + "," +
                 CsvField(JoinNames(catalog, set)) + "," +
                 FormatDouble(stage.min_cost) + "\n";
        }
      };
      emit("E", stage.expanded);
      emit("T", stage.satisfying);
      emit("S", stage.to_expand);
      emit("I", stage.pruned);
    }
    return out;
  }
  out = "step,attribute,score,sensitivity,cost\n";
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    const BaselineStep& step = result.steps[i];
    out += std::to_string(i + 1) + "," + CsvField(catalog[step.attribute].name) +
           "," + FormatDouble(step.score) + "," +
           FormatDouble(step.sensitivity) + "," + FormatDouble(step.cost) +
           "\n";
  }
  return out;
}

std::string EvaluationToJson(const Evaluation& evaluation,
                             const AttributeSet& attributes,
                             const AttributeCatalog& catalog,
                             const RunInfo& info) {
  json doc = {{"attributes", Names(catalog, attributes)},
              {"cost_breakdown", Breakdown(evaluation.cost)},
              {"sensitivity", evaluation.sensitivity},
              {"impersonated", evaluation.impersonated},
              {"config", Config(info)}};
  return doc.dump(2) + "\n";
}

std::string EvaluationToCsv(const Evaluation& evaluation,
                            const AttributeSet& attributes,
                            const AttributeCatalog& catalog) {
  std::string out =
      "attributes,memory_bytes,time_ms,instability_changes,total_points,"
      "sensitivity,impersonated\n";
  out += CsvField(JoinNames(catalog, attributes)) + "," +
         FormatDouble(evaluation.cost.memory_bytes) + "," +
         FormatDouble(evaluation.cost.time_ms) + "," +
         FormatDouble(evaluation.cost.instability_changes) + "," +
         FormatDouble(evaluation.cost.total_points) + "," +
         FormatDouble(evaluation.sensitivity) + "," +
         std::to_string(evaluation.impersonated.size()) + "\n";
  return out;
}

}  // namespace fpselect
