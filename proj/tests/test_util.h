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

// Fixtures and brute-force reference implementations shared by the tests.
// The reference code recomputes everything from raw observations and does
// not call into the library's matching, cost, or sensitivity code.

#ifndef FPSELECT_TESTS_TEST_UTIL_H_
#define FPSELECT_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fpselect/attribute_set.h"
#include "fpselect/cost.h"
#include "fpselect/dataset.h"
#include "fpselect/selection.h"

namespace fpselect::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(FPSELECT_TEST_DATA_DIR) + "/" + name;
}

// Six users, four exact-match attributes, one observation each:
// CookieEnabled (0), Language (1), Screen (2), Timezone (3).
inline Dataset LoadSixUsers() {
  return LoadDataset(DataPath("six_users.jsonl"),
                     DataPath("six_users_catalog.json"));
}

inline Observation Obs(std::string browser, std::int64_t seq,
                       std::vector<std::string> values,
                       std::vector<double> ms = {}) {
  if (ms.empty()) ms.assign(values.size(), 0.0);
  return Observation{std::move(browser), seq, std::move(values), std::move(ms)};
}

inline AttributeSpec Category(std::string name, bool async = false) {
  return AttributeSpec{std::move(name), AttributeKind::kCategory, async, 0.0,
                       ";"};
}

// Random dataset over `n` category attributes (names a00, a01, ...), with
// small skewed domains and repeated observations per browser.
inline Dataset RandomDataset(std::mt19937_64& rng, std::size_t n,
                             std::size_t browsers, std::size_t max_obs = 3) {
  std::vector<AttributeSpec> specs;
  std::vector<std::size_t> domain(n);
  std::uniform_int_distribution<std::size_t> card(1, 5);
  std::uniform_int_distribution<int> coin(0, 1);
  for (std::size_t a = 0; a < n; ++a) {
    char name[24];
    std::snprintf(name, sizeof(name), "a%02zu", a);
    specs.push_back(Category(name, coin(rng) == 1));
    domain[a] = card(rng);
  }
  std::uniform_int_distribution<std::size_t> obs_count(1, max_obs);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Observation> observations;
  for (std::size_t b = 0; b < browsers; ++b) {
    std::vector<std::size_t> idx(n);
    for (std::size_t a = 0; a < n; ++a) {
      // Squared uniform skews toward small indices.
      double u = unit(rng);
      idx[a] = static_cast<std::size_t>(u * u * domain[a]);
    }
    std::size_t count = obs_count(rng);
    for (std::size_t o = 0; o < count; ++o) {
      if (o > 0) {
        for (std::size_t a = 0; a < n; ++a) {
          if (unit(rng) < 0.2) idx[a] = (idx[a] + 1) % domain[a];
        }
      }
      std::vector<std::string> values(n);
      std::vector<double> ms(n);
      for (std::size_t a = 0; a < n; ++a) {
        values[a] = std::string(1 + a % 3, 'x') + std::to_string(idx[a]);
        ms[a] = std::round(unit(rng) * 100.0) / 10.0;
      }
      observations.push_back(
          Obs("b" + std::to_string(1000 + b), static_cast<std::int64_t>(o),
              std::move(values), std::move(ms)));
    }
  }
  return Dataset(AttributeCatalog(std::move(specs)), std::move(observations));
}

// Same-browser acceptance under exact, number-threshold, or category rules.
inline bool ReferenceMatch(const AttributeSpec& spec, const std::string& x,
                           const std::string& y) {
  if (x == y) return true;
  if (spec.kind == AttributeKind::kNumber) {
    return std::fabs(std::stod(x) - std::stod(y)) <= spec.match_threshold;
  }
  return false;
}

// Share of users impersonated by the attacker who knows the exact
// distribution of stored fingerprints and submits its `beta` most common
// projections on `set` (ties broken by the smaller tuple).
inline double ReferenceSensitivity(const Dataset& dataset,
                                   const AttributeSet& set, std::size_t beta) {
  const AttributeCatalog& catalog = dataset.catalog();
  std::vector<std::vector<std::string>> stored;
  for (std::size_t obs : dataset.stored_observations()) {
    std::vector<std::string> fp;
    for (AttributeIndex a : set) fp.push_back(dataset.observations()[obs].values[a]);
    stored.push_back(std::move(fp));
  }
  std::map<std::vector<std::string>, std::size_t> counts;
  for (const auto& fp : stored) ++counts[fp];
  std::vector<std::pair<std::size_t, std::vector<std::string>>> ranked;
  for (const auto& [fp, count] : counts) ranked.emplace_back(count, fp);
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  if (ranked.size() > beta) ranked.resize(beta);
  std::size_t hit = 0;
  for (const auto& fp : stored) {
    for (const auto& [count, entry] : ranked) {
      bool all = true;
      for (std::size_t i = 0; i < set.size() && all; ++i) {
        all = ReferenceMatch(catalog[set[i]], fp[i], entry[i]);
      }
      if (all) {
        ++hit;
        break;
      }
    }
  }
  return static_cast<double>(hit) / static_cast<double>(stored.size());
}

// Cost recomputed from raw observations. Consecutive pairs are found by
// sorting each browser's observations by seq.
inline CostBreakdown ReferenceCost(const Dataset& dataset,
                                   const AttributeSet& set,
                                   const CostWeights& weights) {
  const auto& observations = dataset.observations();
  const AttributeCatalog& catalog = dataset.catalog();
  double mem = 0.0;
  double time = 0.0;
  for (const Observation& obs : observations) {
    double async_max = 0.0;
    double seq_sum = 0.0;
    for (AttributeIndex a : set) {
      mem += static_cast<double>(obs.values[a].size());
      if (catalog[a].is_async) {
        async_max = std::max(async_max, obs.collect_ms[a]);
      } else {
        seq_sum += obs.collect_ms[a];
      }
    }
    time += std::max(async_max, seq_sum);
  }
  mem /= static_cast<double>(observations.size());
  time /= static_cast<double>(observations.size());

  std::map<std::string, std::vector<std::pair<std::int64_t, std::size_t>>>
      by_browser;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    by_browser[observations[i].browser_id].emplace_back(observations[i].seq, i);
  }
  double changes = 0.0;
  std::size_t pairs = 0;
  for (auto& [id, list] : by_browser) {
    std::sort(list.begin(), list.end());
    for (std::size_t j = 1; j < list.size(); ++j) {
      const Observation& x = observations[list[j - 1].second];
      const Observation& y = observations[list[j].second];
      for (AttributeIndex a : set) changes += x.values[a] != y.values[a] ? 1 : 0;
      ++pairs;
    }
  }
  double ins = pairs == 0 ? 0.0 : changes / static_cast<double>(pairs);
  CostBreakdown out;
  out.memory_bytes = mem;
  out.time_ms = time;
  out.instability_changes = ins;
  out.total_points = weights.memory() * mem + weights.time() * time +
                     weights.instability() * ins;
  return out;
}

// Lattice given by explicit tables, keyed by subset bitmask.
class TableProblem : public SelectionProblem {
 public:
  TableProblem(std::size_t n, std::map<std::uint32_t, double> cost,
               std::map<std::uint32_t, double> sensitivity)
      : n_(n), cost_(std::move(cost)), sensitivity_(std::move(sensitivity)) {}

  std::size_t num_attributes() const override { return n_; }

  Measurement Measure(const AttributeSet& set) const override {
    std::uint32_t mask = 0;
    for (AttributeIndex a : set) mask |= 1u << a;
    Measurement m;
    m.cost.total_points = cost_.at(mask);
    m.sensitivity = sensitivity_.at(mask);
    return m;
  }

 private:
  std::size_t n_;
  std::map<std::uint32_t, double> cost_;
  std::map<std::uint32_t, double> sensitivity_;
};

// Lattice over attributes {1, 2, 3} (indices 0, 1, 2) consistent with the
// textbook walk-through: the search reaches {1, 2} at cost 20 below
// alpha = 0.15 while {2, 3} costs more than 20.
inline TableProblem WorkedLattice() {
  std::map<std::uint32_t, double> cost = {
      {0b000, 0},  {0b001, 5},  {0b010, 15}, {0b100, 8},
      {0b011, 20}, {0b101, 13}, {0b110, 25}, {0b111, 30}};
  std::map<std::uint32_t, double> sensitivity = {
      {0b000, 1.0}, {0b001, 0.5}, {0b010, 0.6}, {0b100, 0.4},
      {0b011, 0.1}, {0b101, 0.3}, {0b110, 0.2}, {0b111, 0.05}};
  return TableProblem(3, std::move(cost), std::move(sensitivity));
}

}  // namespace fpselect::testing

#endif  // FPSELECT_TESTS_TEST_UTIL_H_
