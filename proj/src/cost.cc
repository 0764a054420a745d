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

#include "fpselect/cost.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fpselect/error.h"

namespace fpselect {

namespace {

void RequireObservations(const Dataset& dataset) {
  if (dataset.size() == 0) {
    throw Error(ErrorCode::kPrecondition, "empty dataset");
  }
}

double ObservationTime(const Observation& obs, const AttributeSet& attributes,
                       const AttributeCatalog& catalog) {
  double longest_async = 0.0;
  double sequential = 0.0;
  for (AttributeIndex a : attributes) {
    if (catalog[a].is_async) {
      longest_async = std::max(longest_async, obs.collect_ms[a]);
    } else {
      sequential += obs.collect_ms[a];
    }
  }
  return std::max(longest_async, sequential);
}

nlohmann::json BreakdownJson(const CostBreakdown& cost) {
  return {{"memory_bytes", cost.memory_bytes},
          {"time_ms", cost.time_ms},
          {"instability_changes", cost.instability_changes},
          {"total_points", cost.total_points}};
}

nlohmann::json StatsJson(const DimensionStats& stats) {
  return {{"min", stats.min}, {"avg", stats.avg}, {"max", stats.max}};
}

}  // namespace

CostWeights::CostWeights(double memory, double time, double instability)
    : gamma_{memory, time, instability} {
  for (double w : gamma_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kConfig, "cost weights must be strictly positive");
    }
  }
}

CostWeights CostWeights::Parse(const std::string& text) {
  std::vector<double> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfig, "invalid weight \"" + item + "\"");
    }
  }
  if (parts.size() != 3) {
    throw Error(ErrorCode::kConfig,
                "expected three comma-separated weights, got \"" + text + "\"");
  }
  return CostWeights(parts[0], parts[1], parts[2]);
}

CostBreakdown Combine(double memory_bytes, double time_ms,
                      double instability_changes, const CostWeights& weights) {
  CostBreakdown out;
  out.memory_bytes = memory_bytes;
  out.time_ms = time_ms;
  out.instability_changes = instability_changes;
  out.total_points = weights.memory() * memory_bytes +
                     weights.time() * time_ms +
                     weights.instability() * instability_changes;
  return out;
}

double MemCost(const AttributeSet& attributes, const Dataset& dataset) {
  RequireObservations(dataset);
  double total = 0.0;
  for (const Observation& obs : dataset.observations()) {
    for (AttributeIndex a : attributes) total += ValueSize(obs.values.at(a));
  }
  return total / static_cast<double>(dataset.size());
}

double TimeCost(const AttributeSet& attributes, const Dataset& dataset) {
  RequireObservations(dataset);
  double total = 0.0;
  for (const Observation& obs : dataset.observations()) {
    total += ObservationTime(obs, attributes, dataset.catalog());
  }
  return total / static_cast<double>(dataset.size());
}

double InsCost(const AttributeSet& attributes, const Dataset& dataset) {
  RequireObservations(dataset);
  const auto& pairs = dataset.consecutive_observation_pairs();
  if (pairs.empty()) {
    throw Error(ErrorCode::kPrecondition, "no consecutive observation pairs");
  }
  const auto& observations = dataset.observations();
  double changes = 0.0;
  for (const auto& [first, second] : pairs) {
    for (AttributeIndex a : attributes) {
      if (observations[first].values.at(a) != observations[second].values[a]) {
        changes += 1.0;
      }
    }
  }
  return changes / static_cast<double>(pairs.size());
}

CostBreakdown TotalCost(const AttributeSet& attributes, const Dataset& dataset,
                        const CostWeights& weights) {
  return Combine(MemCost(attributes, dataset), TimeCost(attributes, dataset),
                 InsCost(attributes, dataset), weights);
}

CostModel::CostModel(const Dataset& dataset, CostWeights weights)
    : weights_(weights),
      has_pairs_(!dataset.consecutive_observation_pairs().empty()),
      num_attributes_(dataset.catalog().size()),
      num_observations_(dataset.size()) {
  RequireObservations(dataset);
  const auto& observations = dataset.observations();
  mean_size_.assign(num_attributes_, 0.0);
  change_rate_.assign(num_attributes_, 0.0);
  is_async_.resize(num_attributes_);
  collect_ms_.reserve(num_observations_ * num_attributes_);
  for (std::size_t a = 0; a < num_attributes_; ++a) {
    is_async_[a] = dataset.catalog()[a].is_async;
  }
  for (const Observation& obs : observations) {
    for (std::size_t a = 0; a < num_attributes_; ++a) {
      mean_size_[a] += static_cast<double>(ValueSize(obs.values[a]));
      collect_ms_.push_back(obs.collect_ms[a]);
    }
  }
  for (double& size : mean_size_) size /= static_cast<double>(dataset.size());
  const auto& pairs = dataset.consecutive_observation_pairs();
  for (const auto& [first, second] : pairs) {
    for (std::size_t a = 0; a < num_attributes_; ++a) {
      if (observations[first].values[a] != observations[second].values[a]) {
        change_rate_[a] += 1.0;
      }
    }
  }
  if (!pairs.empty()) {
    for (double& rate : change_rate_) rate /= static_cast<double>(pairs.size());
  }
}

CostBreakdown CostModel::Cost(const AttributeSet& attributes) const {
  double memory = 0.0;
  double instability = 0.0;
  for (AttributeIndex a : attributes) {
    if (a >= num_attributes_) {
      throw Error(ErrorCode::kConfig, "attribute index out of range");
    }
    memory += mean_size_[a];
    instability += change_rate_[a];
  }
  double time = 0.0;
  if (!attributes.empty()) {
    for (std::size_t o = 0; o < num_observations_; ++o) {
      const double* row = collect_ms_.data() + o * num_attributes_;
      double longest_async = 0.0;
      double sequential = 0.0;
      for (AttributeIndex a : attributes) {
        if (is_async_[a]) {
          longest_async = std::max(longest_async, row[a]);
        } else {
          sequential += row[a];
        }
      }
      time += std::max(longest_async, sequential);
    }
    time /= static_cast<double>(num_observations_);
  }
  return Combine(memory, time, instability, weights_);
}

AttributeCostStats ComputeAttributeCostStats(const Dataset& dataset,
                                             const CostWeights& weights) {
  CostModel model(dataset, weights);
  AttributeCostStats stats;
  stats.candidate = model.Cost(dataset.catalog().All());
  const std::size_t n = dataset.catalog().size();
  if (n == 0) return stats;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  DimensionStats* dims[] = {&stats.memory_bytes, &stats.time_ms,
                            &stats.instability_changes, &stats.total_points};
  for (DimensionStats* d : dims) *d = {kInf, 0.0, -kInf};
  for (AttributeIndex a = 0; a < n; ++a) {
    CostBreakdown cost = model.Cost(AttributeSet{a});
    stats.attributes.push_back({dataset.catalog()[a].name, cost});
    const double values[] = {cost.memory_bytes, cost.time_ms,
                             cost.instability_changes, cost.total_points};
    for (int i = 0; i < 4; ++i) {
      dims[i]->min = std::min(dims[i]->min, values[i]);
      dims[i]->max = std::max(dims[i]->max, values[i]);
      dims[i]->avg += values[i];
    }
  }
  for (DimensionStats* d : dims) d->avg /= static_cast<double>(n);
  return stats;
}

std::string CostBreakdownToJson(const CostBreakdown& cost) {
  return BreakdownJson(cost).dump(2) + "\n";
}

std::string AttributeCostStatsToJson(const AttributeCostStats& stats) {
  nlohmann::json attributes = nlohmann::json::array();
  for (const AttributeCost& entry : stats.attributes) {
    nlohmann::json item = BreakdownJson(entry.cost);
    item["name"] = entry.name;
    attributes.push_back(std::move(item));
  }
  nlohmann::json doc = {
      {"candidate", BreakdownJson(stats.candidate)},
      {"attributes", std::move(attributes)},
      {"memory_bytes", StatsJson(stats.memory_bytes)},
      {"time_ms", StatsJson(stats.time_ms)},
      {"instability_changes", StatsJson(stats.instability_changes)},
      {"total_points", StatsJson(stats.total_points)},
  };
  return doc.dump(2) + "\n";
}

std::string AttributeCostStatsToCsv(const AttributeCostStats& stats) {
  std::ostringstream out;
  out.precision(17);
  out << "name,total_points,memory_bytes,time_ms,instability_changes\n";
  auto row = [&](const std::string& name, double total, double memory,
                 double time, double instability) {
    out << name << "," << total << "," << memory << "," << time << ","
        << instability << "\n";
  };
  for (const AttributeCost& entry : stats.attributes) {
    row(entry.name, entry.cost.total_points, entry.cost.memory_bytes,
        entry.cost.time_ms, entry.cost.instability_changes);
  }
  row("candidate", stats.candidate.total_points, stats.candidate.memory_bytes,
      stats.candidate.time_ms, stats.candidate.instability_changes);
  row("min", stats.total_points.min, stats.memory_bytes.min, stats.time_ms.min,
      stats.instability_changes.min);
  row("avg", stats.total_points.avg, stats.memory_bytes.avg, stats.time_ms.avg,
      stats.instability_changes.avg);
  row("max", stats.total_points.max, stats.memory_bytes.max, stats.time_ms.max,
      stats.instability_changes.max);
  return out.str();
}

}  // namespace fpselect
