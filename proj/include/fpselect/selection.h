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

// Attribute selection: find a low-cost attribute set C with s(C) <= alpha.
//
// The search space is the lattice of attribute subsets ordered by inclusion.
// Cost strictly increases and sensitivity never increases along the order, so
// the answer lies just above the frontier between sets that satisfy alpha and
// sets that do not. Removing attributes from the candidate set while staying
// under alpha is a knapsack problem whose item values and weights depend on
// what was already removed, so the problem is NP-hard and we rely on:
//
//   * SelectGreedy: bottom-up beam search following the k most efficient
//     paths, efficiency being (c(A) - c(C)) / s(C), with pruning of sets that
//     cannot beat the cheapest satisfying set found so far.
//   * SelectEntropyBaseline / SelectCondEntropyBaseline: the usual
//     entropy-ranked forward selection, stopped at the first satisfying set.
//   * SelectExhaustive: the exact optimum over all 2^n subsets, for
//     validation on small catalogs.
//
// All methods report "no solution" when the full candidate set does not
// satisfy alpha.

#ifndef FPSELECT_SELECTION_H_
#define FPSELECT_SELECTION_H_

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "fpselect/attribute_set.h"
#include "fpselect/cost.h"
#include "fpselect/dataset.h"
#include "fpselect/sensitivity.h"

namespace fpselect {

struct Measurement {
  CostBreakdown cost;
  double sensitivity = 1.0;
};

// Cost and sensitivity oracle over the subsets of `num_attributes()`
// attributes. Measure() must be pure and safe to call concurrently.
class SelectionProblem {
 public:
  virtual ~SelectionProblem() = default;
  virtual std::size_t num_attributes() const = 0;
  virtual Measurement Measure(const AttributeSet& attributes) const = 0;
};

// Measures attribute sets on a dataset against an attacker. Keeps references
// to both; they must outlive the problem.
class DatasetProblem : public SelectionProblem {
 public:
  DatasetProblem(const Dataset& dataset, const AttackerInstance& attacker,
                 const CostWeights& weights);

  std::size_t num_attributes() const override;
  Measurement Measure(const AttributeSet& attributes) const override;

  // Entropy in bits of the users' stored fingerprints projected on
  // `attributes`.
  double JointEntropy(const AttributeSet& attributes) const;

  const Dataset& dataset() const { return dataset_; }
  const AttackerInstance& attacker() const { return attacker_; }
  const SensitivityEvaluator& evaluator() const { return evaluator_; }
  const CostModel& cost_model() const { return cost_model_; }

 private:
  const Dataset& dataset_;
  const AttackerInstance& attacker_;
  CostModel cost_model_;
  SensitivityEvaluator evaluator_;
};

struct SelectionConfig {
  // Sensitivity threshold; must be > 0.
  double alpha = 0.015;
  // Explored paths; must be >= 1.
  std::size_t k = 1;
  CostWeights weights = CostWeights::Default();
  // Measurement workers; 0 uses the hardware concurrency. Results do not
  // depend on this value.
  std::size_t threads = 0;

  // Throws Error(kConfig) on an invalid alpha or k.
  void Validate() const;
};

enum class SelectionMethod { kGreedy, kEntropy, kCondEntropy, kExhaustive };

std::string_view MethodName(SelectionMethod method);

// Collections of the greedy search at the end of one stage.
struct StageSnapshot {
  std::size_t stage = 0;
  std::vector<AttributeSet> expanded;    // E
  std::vector<AttributeSet> satisfying;  // T
  std::vector<AttributeSet> to_expand;   // S
  std::vector<AttributeSet> pruned;      // I
  double min_cost = std::numeric_limits<double>::infinity();
};

// One pick of an entropy baseline.
struct BaselineStep {
  AttributeIndex attribute = 0;
  // Entropy of the attribute, or its entropy conditioned on earlier picks.
  double score = 0.0;
  double sensitivity = 1.0;
  double cost = 0.0;
};

struct SelectionResult {
  SelectionMethod method = SelectionMethod::kGreedy;
  bool solution_found = false;
  AttributeSet chosen;
  Measurement measurement;
  // s(A) of the full candidate set.
  double full_sensitivity = 1.0;
  // Number of attribute sets whose cost and sensitivity were measured,
  // excluding the initial s(A) check.
  std::size_t explored_count = 0;
  std::vector<StageSnapshot> trace;
  std::vector<BaselineStep> steps;
};

// (full_cost - cost) / sensitivity; +inf when sensitivity is 0.
double Efficiency(double full_cost, double cost, double sensitivity);

SelectionResult SelectGreedy(const SelectionProblem& problem,
                             const SelectionConfig& config);
SelectionResult SelectGreedy(const Dataset& dataset,
                             const AttackerInstance& attacker,
                             const SelectionConfig& config);

SelectionResult SelectEntropyBaseline(const DatasetProblem& problem,
                                      const SelectionConfig& config);
SelectionResult SelectEntropyBaseline(const Dataset& dataset,
                                      const AttackerInstance& attacker,
                                      const SelectionConfig& config);

SelectionResult SelectCondEntropyBaseline(const DatasetProblem& problem,
                                          const SelectionConfig& config);
SelectionResult SelectCondEntropyBaseline(const Dataset& dataset,
                                          const AttackerInstance& attacker,
                                          const SelectionConfig& config);

// Throws Error(kConfig) when the catalog has more than `max_attributes`
// attributes.
SelectionResult SelectExhaustive(const SelectionProblem& problem,
                                 const SelectionConfig& config,
                                 std::size_t max_attributes = 15);
SelectionResult SelectExhaustive(const Dataset& dataset,
                                 const AttackerInstance& attacker,
                                 const SelectionConfig& config,
                                 std::size_t max_attributes = 15);

struct Evaluation {
  CostBreakdown cost;
  double sensitivity = 1.0;
  std::vector<std::string> impersonated;
};

Evaluation Evaluate(const AttributeSet& attributes, const Dataset& dataset,
                    const AttackerInstance& attacker,
                    const CostWeights& weights);

}  // namespace fpselect

#endif  // FPSELECT_SELECTION_H_
