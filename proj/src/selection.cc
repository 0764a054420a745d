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

#include "fpselect/selection.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "fpselect/error.h"
#include "fpselect/parallel.h"

namespace fpselect {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Entropy scores are compared on a 1e-12 grid so that ties are exact.
std::int64_t ScoreKey(double score) { return std::llround(score * 1e12); }

// Memoized measurements; every set is measured at most once per search.
class MeasureCache {
 public:
  MeasureCache(const SelectionProblem& problem, std::size_t threads)
      : problem_(problem), threads_(threads) {}

  // Measures the sets not seen before, concurrently.
  void MeasureAll(const std::vector<AttributeSet>& sets) {
    std::vector<const AttributeSet*> missing;
    for (const AttributeSet& set : sets) {
      if (!cache_.contains(set)) missing.push_back(&set);
    }
    std::vector<Measurement> results(missing.size());
    ParallelFor(missing.size(), threads_, [&](std::size_t i) {
      results[i] = problem_.Measure(*missing[i]);
    });
    for (std::size_t i = 0; i < missing.size(); ++i) {
      cache_.emplace(*missing[i], results[i]);
    }
  }

  const Measurement& Get(const AttributeSet& set) {
    auto it = cache_.find(set);
    if (it == cache_.end()) {
      it = cache_.emplace(set, problem_.Measure(set)).first;
    }
    return it->second;
  }

 private:
  const SelectionProblem& problem_;
  std::size_t threads_;
  std::unordered_map<AttributeSet, Measurement, AttributeSetHash> cache_;
};

SelectionResult NoSolution(SelectionMethod method, double full_sensitivity) {
  SelectionResult result;
  result.method = method;
  result.solution_found = false;
  result.full_sensitivity = full_sensitivity;
  return result;
}

bool HasStrictSubsetIn(const AttributeSet& set,
                       const std::vector<AttributeSet>& collection) {
  return std::any_of(collection.begin(), collection.end(),
                     [&](const AttributeSet& other) {
                       return other.IsStrictSubsetOf(set);
                     });
}

std::vector<AttributeSet> Sorted(std::vector<AttributeSet> sets) {
  std::sort(sets.begin(), sets.end());
  return sets;
}

// Forward selection over an attribute ranking recomputed at each step.
// `score(chosen, a)` ranks the candidates; the highest score wins and ties go
// to the lower attribute index.
template <typename ScoreFn>
SelectionResult ForwardSelect(const DatasetProblem& problem,
                              const SelectionConfig& config,
                              SelectionMethod method, ScoreFn score) {
  config.Validate();
  const std::size_t n = problem.num_attributes();
  const AttributeSet all = AttributeSet::Full(n);
  const Measurement full = problem.Measure(all);
  if (full.sensitivity > config.alpha) {
    return NoSolution(method, full.sensitivity);
  }

  SelectionResult result;
  result.method = method;
  result.full_sensitivity = full.sensitivity;
  AttributeSet chosen;
  Measurement current = full;
  while (chosen.size() < n) {
    std::vector<AttributeIndex> candidates;
    for (AttributeIndex a = 0; a < n; ++a) {
      if (!chosen.Contains(a)) candidates.push_back(a);
    }
    std::vector<double> scores(candidates.size());
    ParallelFor(candidates.size(), config.threads, [&](std::size_t i) {
      scores[i] = score(chosen, candidates[i]);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      if (ScoreKey(scores[i]) > ScoreKey(scores[best])) best = i;
    }
    chosen = chosen.With(candidates[best]);
    current = problem.Measure(chosen);
    ++result.explored_count;
    result.steps.push_back({candidates[best], scores[best],
                            current.sensitivity, current.cost.total_points});
    if (current.sensitivity <= config.alpha) break;
  }
  result.solution_found = current.sensitivity <= config.alpha;
  result.chosen = chosen;
  result.measurement = current;
  return result;
}

}  // namespace

DatasetProblem::DatasetProblem(const Dataset& dataset,
                               const AttackerInstance& attacker,
                               const CostWeights& weights)
    : dataset_(dataset),
      attacker_(attacker),
      cost_model_(dataset, weights),
      evaluator_(dataset.catalog(), UserMappingOf(dataset)) {}

std::size_t DatasetProblem::num_attributes() const {
  return dataset_.catalog().size();
}

Measurement DatasetProblem::Measure(const AttributeSet& attributes) const {
  Measurement m;
  m.cost = cost_model_.Cost(attributes);
  m.sensitivity = evaluator_.Sensitivity(BuildDictionary(attacker_, attributes));
  return m;
}

double DatasetProblem::JointEntropy(const AttributeSet& attributes) const {
  return Entropy(ComputePmf(dataset_, attributes));
}

void SelectionConfig::Validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kConfig, "alpha must be a positive number");
  }
  if (k == 0) throw Error(ErrorCode::kConfig, "k must be at least 1");
}

std::string_view MethodName(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::kGreedy:
      return "greedy";
    case SelectionMethod::kEntropy:
      return "entropy";
    case SelectionMethod::kCondEntropy:
      return "cond-entropy";
    case SelectionMethod::kExhaustive:
      return "exhaustive";
  }
  return "greedy";
}

double Efficiency(double full_cost, double cost, double sensitivity) {
  if (sensitivity <= 0.0) return kInfinity;
  return (full_cost - cost) / sensitivity;
}

SelectionResult SelectGreedy(const SelectionProblem& problem,
                             const SelectionConfig& config) {
  config.Validate();
  const std::size_t n = problem.num_attributes();
  MeasureCache cache(problem, config.threads);
  const AttributeSet all = AttributeSet::Full(n);
  const Measurement full = cache.Get(all);
  if (full.sensitivity > config.alpha) {
    return NoSolution(SelectionMethod::kGreedy, full.sensitivity);
  }

  SelectionResult result;
  result.method = SelectionMethod::kGreedy;
  result.full_sensitivity = full.sensitivity;

  double min_cost = kInfinity;
  std::vector<AttributeSet> satisfying;  // T
  std::vector<AttributeSet> pruned;      // I
  // k copies of the empty set collapse to one.
  std::vector<AttributeSet> to_expand = {AttributeSet()};  // S

  for (std::size_t stage = 1; !to_expand.empty(); ++stage) {
    std::set<AttributeSet> unique_expanded;
    for (const AttributeSet& base : to_expand) {
      for (AttributeIndex a = 0; a < n; ++a) {
        if (base.Contains(a)) continue;
        AttributeSet candidate = base.With(a);
        if (HasStrictSubsetIn(candidate, satisfying) ||
            HasStrictSubsetIn(candidate, pruned)) {
          continue;
        }
        unique_expanded.insert(std::move(candidate));
      }
    }
    std::vector<AttributeSet> expanded(unique_expanded.begin(),
                                       unique_expanded.end());
    cache.MeasureAll(expanded);
    result.explored_count += expanded.size();

    std::vector<AttributeSet> next;
    for (const AttributeSet& set : expanded) {
      const Measurement& m = cache.Get(set);
      if (m.sensitivity <= config.alpha) {
        satisfying.push_back(set);
        min_cost = std::min(min_cost, m.cost.total_points);
      } else if (m.cost.total_points < min_cost) {
        next.push_back(set);
      } else {
        pruned.push_back(set);
      }
    }
    // A cheaper satisfying set found later in the stage also disqualifies
    // sets already queued for expansion.
    std::erase_if(next, [&](const AttributeSet& set) {
      if (cache.Get(set).cost.total_points < min_cost) return false;
      pruned.push_back(set);
      return true;
    });

    const double full_cost = full.cost.total_points;
    std::sort(next.begin(), next.end(),
              [&](const AttributeSet& a, const AttributeSet& b) {
                const Measurement& ma = cache.Get(a);
                const Measurement& mb = cache.Get(b);
                double ea = Efficiency(full_cost, ma.cost.total_points,
                                       ma.sensitivity);
                double eb = Efficiency(full_cost, mb.cost.total_points,
                                       mb.sensitivity);
                if (ea != eb) return ea > eb;
                if (ma.cost.total_points != mb.cost.total_points) {
                  return ma.cost.total_points < mb.cost.total_points;
                }
                return a < b;
              });
    if (next.size() > config.k) next.resize(config.k);
    to_expand = std::move(next);

    StageSnapshot snapshot;
    snapshot.stage = stage;
    snapshot.expanded = expanded;
    snapshot.satisfying = Sorted(satisfying);
    snapshot.to_expand = to_expand;
    snapshot.pruned = Sorted(pruned);
    snapshot.min_cost = min_cost;
    result.trace.push_back(std::move(snapshot));
  }

  if (satisfying.empty()) {
    // Only reachable with an empty catalog, where A = {} satisfies alpha.
    result.solution_found = true;
    result.chosen = all;
    result.measurement = full;
    return result;
  }
  const AttributeSet* best = nullptr;
  for (const AttributeSet& set : satisfying) {
    if (best == nullptr) {
      best = &set;
      continue;
    }
    double cost = cache.Get(set).cost.total_points;
    double best_cost = cache.Get(*best).cost.total_points;
    if (cost < best_cost || (cost == best_cost && set < *best)) best = &set;
  }
  result.solution_found = true;
  result.chosen = *best;
  result.measurement = cache.Get(*best);
  return result;
}

SelectionResult SelectGreedy(const Dataset& dataset,
                             const AttackerInstance& attacker,
                             const SelectionConfig& config) {
  DatasetProblem problem(dataset, attacker, config.weights);
  return SelectGreedy(problem, config);
}

SelectionResult SelectEntropyBaseline(const DatasetProblem& problem,
                                      const SelectionConfig& config) {
  // The ranking is fixed up front: entropy of each attribute on its own.
  const std::size_t n = problem.num_attributes();
  std::vector<double> entropy(n);
  ParallelFor(n, config.threads, [&](std::size_t a) {
    entropy[a] = problem.JointEntropy(
        AttributeSet{static_cast<AttributeIndex>(a)});
  });
  return ForwardSelect(problem, config, SelectionMethod::kEntropy,
                       [&](const AttributeSet&, AttributeIndex a) {
                         return entropy[a];
                       });
}

SelectionResult SelectEntropyBaseline(const Dataset& dataset,
                                      const AttackerInstance& attacker,
                                      const SelectionConfig& config) {
  DatasetProblem problem(dataset, attacker, config.weights);
  return SelectEntropyBaseline(problem, config);
}

SelectionResult SelectCondEntropyBaseline(const DatasetProblem& problem,
                                          const SelectionConfig& config) {
  // H(a | chosen) = H(chosen ∪ {a}) - H(chosen).
  return ForwardSelect(
      problem, config, SelectionMethod::kCondEntropy,
      [&](const AttributeSet& chosen, AttributeIndex a) {
        double gain =
            problem.JointEntropy(chosen.With(a)) - problem.JointEntropy(chosen);
        return std::max(gain, 0.0);
      });
}

SelectionResult SelectCondEntropyBaseline(const Dataset& dataset,
                                          const AttackerInstance& attacker,
                                          const SelectionConfig& config) {
  DatasetProblem problem(dataset, attacker, config.weights);
  return SelectCondEntropyBaseline(problem, config);
}

SelectionResult SelectExhaustive(const SelectionProblem& problem,
                                 const SelectionConfig& config,
                                 std::size_t max_attributes) {
  config.Validate();
  const std::size_t n = problem.num_attributes();
  if (n > max_attributes || n >= 63) {
    throw Error(ErrorCode::kConfig,
                "exhaustive search over " + std::to_string(n) +
                    " attributes exceeds the limit of " +
                    std::to_string(max_attributes));
  }
  const AttributeSet all = AttributeSet::Full(n);
  const Measurement full = problem.Measure(all);
  if (full.sensitivity > config.alpha) {
    return NoSolution(SelectionMethod::kExhaustive, full.sensitivity);
  }

  const std::size_t count = std::size_t{1} << n;
  std::vector<AttributeSet> subsets(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::vector<AttributeIndex> indices;
    for (std::size_t a = 0; a < n; ++a) {
      if (mask & (std::size_t{1} << a)) {
        indices.push_back(static_cast<AttributeIndex>(a));
      }
    }
    subsets[mask] = AttributeSet(std::move(indices));
  }
  std::vector<Measurement> measurements(count);
  ParallelFor(count, config.threads, [&](std::size_t i) {
    measurements[i] = problem.Measure(subsets[i]);
  });

  std::size_t best = count;
  for (std::size_t i = 0; i < count; ++i) {
    if (measurements[i].sensitivity > config.alpha) continue;
    if (best == count) {
      best = i;
      continue;
    }
    double cost = measurements[i].cost.total_points;
    double best_cost = measurements[best].cost.total_points;
    if (cost < best_cost || (cost == best_cost && subsets[i] < subsets[best])) {
      best = i;
    }
  }
  SelectionResult result;
  result.method = SelectionMethod::kExhaustive;
  result.full_sensitivity = full.sensitivity;
  result.explored_count = count;
  // s(A) <= alpha guarantees a satisfying subset exists.
  result.solution_found = true;
  result.chosen = subsets[best];
  result.measurement = measurements[best];
  return result;
}

SelectionResult SelectExhaustive(const Dataset& dataset,
                                 const AttackerInstance& attacker,
                                 const SelectionConfig& config,
                                 std::size_t max_attributes) {
  DatasetProblem problem(dataset, attacker, config.weights);
  return SelectExhaustive(problem, config, max_attributes);
}

Evaluation Evaluate(const AttributeSet& attributes, const Dataset& dataset,
                    const AttackerInstance& attacker,
                    const CostWeights& weights) {
  if (!attributes.IsSubsetOf(dataset.catalog().All())) {
    throw Error(ErrorCode::kConfig, "attribute set " +
                                        attributes.DebugString() +
                                        " exceeds the catalog");
  }
  DatasetProblem problem(dataset, attacker, weights);
  Evaluation evaluation;
  evaluation.cost = problem.cost_model().Cost(attributes);
  std::vector<bool> flags =
      problem.evaluator().Impersonated(BuildDictionary(attacker, attributes));
  for (std::size_t u = 0; u < flags.size(); ++u) {
    if (flags[u]) evaluation.impersonated.push_back(dataset.user_ids()[u]);
  }
  evaluation.sensitivity = static_cast<double>(evaluation.impersonated.size()) /
                           static_cast<double>(flags.size());
  return evaluation;
}

}  // namespace fpselect
