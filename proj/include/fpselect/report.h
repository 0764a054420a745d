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

#ifndef FPSELECT_REPORT_H_
#define FPSELECT_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "fpselect/cost.h"
#include "fpselect/dataset.h"
#include "fpselect/selection.h"

namespace fpselect {

// Effective configuration embedded in every report.
struct RunInfo {
  std::string method;
  double alpha = 0.0;
  std::size_t beta = 1;
  std::size_t k = 1;
  CostWeights weights = CostWeights::Default();
  std::uint64_t seed = 0;
  std::string knowledge;
  std::string dataset_path;
  std::string catalog_path;
  std::string pmf_path;
};

// Keys: status ("ok" | "no_solution"), chosen, cost_breakdown, sensitivity,
// full_sensitivity, explored_count, trace, steps, runtime_ms, config.
// runtime_ms is null unless given, which keeps reports reproducible.
std::string SelectionReportToJson(const SelectionResult& result,
                                  const AttributeCatalog& catalog,
                                  const RunInfo& info,
                                  std::optional<double> runtime_ms);

// Greedy: stage,collection,attributes,cost_bound rows, one per set.
// Baselines: step,attribute,score,sensitivity,cost rows.
// Exhaustive: header only.
std::string TraceToCsv(const SelectionResult& result,
                       const AttributeCatalog& catalog);

std::string EvaluationToJson(const Evaluation& evaluation,
                             const AttributeSet& attributes,
                             const AttributeCatalog& catalog,
                             const RunInfo& info);
std::string EvaluationToCsv(const Evaluation& evaluation,
                            const AttributeSet& attributes,
                            const AttributeCatalog& catalog);

// RFC 4180 quoting when needed.
std::string CsvField(const std::string& field);

}  // namespace fpselect

#endif  // FPSELECT_REPORT_H_
