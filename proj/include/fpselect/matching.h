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

#ifndef FPSELECT_MATCHING_H_
#define FPSELECT_MATCHING_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fpselect/attribute_set.h"
#include "fpselect/dataset.h"

namespace fpselect {

enum class DistanceKind {
  kEditDistance,
  kJaccardOnSets,
  kAbsoluteDifference,
  kKroneckerComplement,
};

DistanceKind DistanceKindFor(AttributeKind kind);

// Levenshtein distance over Unicode code points.
std::size_t EditDistance(std::string_view a, std::string_view b);

// Distance between two attribute values. `separator` is only used by
// kJaccardOnSets. Throws Error(kParse) when a kAbsoluteDifference operand is
// not a finite number.
double Distance(DistanceKind kind, std::string_view x, std::string_view y,
                std::string_view separator = ";");

double Distance(const AttributeSpec& spec, std::string_view x,
                std::string_view y);

// Whether `submitted` is accepted as an evolution of `stored`. Dynamic
// attributes match only identical values; unparsable numbers never match
// unless identical.
bool AttributeMatches(const AttributeSpec& spec, std::string_view stored,
                      std::string_view submitted);

// Conjunction of AttributeMatches over `attributes`; true when empty.
// `stored` and `submitted` are aligned with `attributes`.
bool FingerprintsMatch(const AttributeSet& attributes,
                       const AttributeCatalog& catalog,
                       const Fingerprint& stored,
                       const Fingerprint& submitted);

struct AttributeCalibration {
  std::string name;
  AttributeKind kind = AttributeKind::kCategory;
  std::vector<double> window_thresholds;
  // Mean of window_thresholds.
  double threshold = 0.0;
};

struct CalibrationReport {
  std::size_t windows = 0;
  std::uint64_t seed = 0;
  std::vector<AttributeCalibration> attributes;
};

struct CalibrationOptions {
  std::size_t windows = 6;
  std::uint64_t seed = 1;
  // Upper bound on negative pairs sampled per window.
  std::size_t negative_cap = 10000;
};

// Max-margin 1D separator between same-browser distances (`positives`) and
// different-browser distances (`negatives`): picks the cut with the fewest
// misclassifications, then the widest gap, then the smallest threshold, and
// returns the midpoint of the gap. Both classes must be non-empty.
double MaxMarginThreshold(std::vector<double> positives,
                          std::vector<double> negatives);

// Splits the observations (file order) into `windows` contiguous chunks. Per
// chunk, positives are distances of consecutive same-browser pairs whose later
// observation falls in the chunk; negatives are distances of seeded random
// pairs of observations from different browsers in the chunk. Throws
// Error(kPrecondition) when a chunk lacks either class.
CalibrationReport CalibrateThresholds(const Dataset& dataset,
                                      const CalibrationOptions& options);

// Copy of `catalog` with every calibrated threshold written back.
AttributeCatalog ApplyCalibration(const AttributeCatalog& catalog,
                                  const CalibrationReport& report);

std::string CalibrationReportToJson(const CalibrationReport& report);

}  // namespace fpselect

#endif  // FPSELECT_MATCHING_H_
