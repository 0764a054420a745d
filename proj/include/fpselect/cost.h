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

// Usability cost of an attribute set: average fingerprint size (bytes),
// average collection time (ms), and average number of attributes changing
// between consecutive observations, combined by a positive weight vector.

#ifndef FPSELECT_COST_H_
#define FPSELECT_COST_H_

#include <array>
#include <string>
#include <vector>

#include "fpselect/attribute_set.h"
#include "fpselect/dataset.h"

namespace fpselect {

class CostWeights {
 public:
  // Points per byte, per millisecond, and per changing attribute.
  // Throws Error(kConfig) unless every weight is finite and > 0.
  CostWeights(double memory, double time, double instability);

  // 10 kB ≡ 1 s ≡ 1 changing attribute ≡ 10,000 points.
  static CostWeights Default() { return CostWeights(1.0, 10.0, 10000.0); }

  // Parses "1,10,10000".
  static CostWeights Parse(const std::string& text);

  double memory() const { return gamma_[0]; }
  double time() const { return gamma_[1]; }
  double instability() const { return gamma_[2]; }

 private:
  std::array<double, 3> gamma_;
};

struct CostBreakdown {
  double memory_bytes = 0.0;
  double time_ms = 0.0;
  double instability_changes = 0.0;
  double total_points = 0.0;
};

// γ · [memory, time, instability].
CostBreakdown Combine(double memory_bytes, double time_ms,
                      double instability_changes, const CostWeights& weights);

// Each throws Error(kPrecondition) on the empty dataset or, for InsCost,
// when the dataset has no consecutive pairs.
double MemCost(const AttributeSet& attributes, const Dataset& dataset);
double TimeCost(const AttributeSet& attributes, const Dataset& dataset);
double InsCost(const AttributeSet& attributes, const Dataset& dataset);
CostBreakdown TotalCost(const AttributeSet& attributes, const Dataset& dataset,
                        const CostWeights& weights);

// Precomputed per-attribute columns for evaluating many attribute sets.
// Thread-safe for concurrent Cost() calls.
//
// A dataset without consecutive pairs has no observable instability; the
// model reports 0 for that dimension instead of failing.
class CostModel {
 public:
  CostModel(const Dataset& dataset, CostWeights weights);

  CostBreakdown Cost(const AttributeSet& attributes) const;

  const CostWeights& weights() const { return weights_; }
  bool has_pairs() const { return has_pairs_; }

 private:
  CostWeights weights_;
  bool has_pairs_ = false;
  std::size_t num_attributes_ = 0;
  std::size_t num_observations_ = 0;
  // Mean value size and change rate per attribute; both are additive.
  std::vector<double> mean_size_;
  std::vector<double> change_rate_;
  std::vector<bool> is_async_;
  // Row-major [observation][attribute] collection times.
  std::vector<double> collect_ms_;
};

struct DimensionStats {
  double min = 0.0;
  double avg = 0.0;
  double max = 0.0;
};

struct AttributeCost {
  std::string name;
  CostBreakdown cost;
};

// Cost of every single attribute, the candidate set, and per-dimension
// min/avg/max over the single attributes (each column independently).
struct AttributeCostStats {
  std::vector<AttributeCost> attributes;
  CostBreakdown candidate;
  DimensionStats memory_bytes;
  DimensionStats time_ms;
  DimensionStats instability_changes;
  DimensionStats total_points;
};

AttributeCostStats ComputeAttributeCostStats(const Dataset& dataset,
                                             const CostWeights& weights);

std::string CostBreakdownToJson(const CostBreakdown& cost);
std::string AttributeCostStatsToJson(const AttributeCostStats& stats);
// One row per attribute plus "candidate", "min", "avg", "max" rows.
std::string AttributeCostStatsToCsv(const AttributeCostStats& stats);

}  // namespace fpselect

#endif  // FPSELECT_COST_H_
