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

#include "fpselect/sensitivity.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "fpselect/error.h"
#include "fpselect/matching.h"

namespace fpselect {

namespace {

// Probabilities are compared on a 1e-12 grid so that masses reached through
// different summation orders (2/6 vs 1/6 + 1/6) tie exactly.
std::int64_t ProbabilityKey(double probability) {
  return std::llround(probability * 1e12);
}

Dictionary DictionaryFromPmf(const Pmf& pmf, const AttributeSet& attributes,
                             std::size_t beta) {
  Pmf projected = pmf.Project(attributes);
  std::vector<const PmfEntry*> order;
  order.reserve(projected.entries().size());
  for (const PmfEntry& entry : projected.entries()) order.push_back(&entry);
  std::size_t keep = std::min(beta, order.size());
  auto more_probable = [](const PmfEntry* a, const PmfEntry* b) {
    std::int64_t ka = ProbabilityKey(a->probability);
    std::int64_t kb = ProbabilityKey(b->probability);
    if (ka != kb) return ka > kb;
    return a->values < b->values;
  };
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    more_probable);
  Dictionary dictionary{attributes, {}};
  dictionary.entries.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    dictionary.entries.push_back(order[i]->values);
  }
  return dictionary;
}

Dictionary DictionaryFromDomains(
    const std::vector<std::vector<std::string>>& domains,
    const AttributeSet& attributes, std::size_t beta) {
  Dictionary dictionary{attributes, {}};
  for (AttributeIndex a : attributes) {
    if (a >= domains.size()) {
      throw Error(ErrorCode::kConfig, "attribute index out of range");
    }
    if (domains[a].empty()) return dictionary;
  }
  // Odometer over the sorted domains yields the product in lexicographic
  // order.
  std::vector<std::size_t> digits(attributes.size(), 0);
  while (dictionary.entries.size() < beta) {
    Fingerprint fingerprint;
    fingerprint.reserve(attributes.size());
    for (std::size_t i = 0; i < attributes.size(); ++i) {
      fingerprint.push_back(domains[attributes[i]][digits[i]]);
    }
    dictionary.entries.push_back(std::move(fingerprint));
    std::size_t i = attributes.size();
    while (i > 0) {
      --i;
      if (++digits[i] < domains[attributes[i]].size()) break;
      digits[i] = 0;
      if (i == 0) return dictionary;
    }
    if (attributes.empty()) break;
  }
  return dictionary;
}

}  // namespace

std::string_view KnowledgeName(AttackerKnowledge knowledge) {
  switch (knowledge) {
    case AttackerKnowledge::kPopulation:
      return "population";
    case AttackerKnowledge::kUniform:
      return "uniform";
    case AttackerKnowledge::kFile:
      return "file";
  }
  return "population";
}

AttackerKnowledge ParseKnowledge(std::string_view name) {
  if (name == "population") return AttackerKnowledge::kPopulation;
  if (name == "uniform") return AttackerKnowledge::kUniform;
  if (name == "file") return AttackerKnowledge::kFile;
  throw Error(ErrorCode::kConfig,
              "unknown attacker knowledge \"" + std::string(name) + "\"");
}

AttackerInstance AttackerInstance::FromPmf(Pmf pmf, std::size_t beta,
                                           AttackerKnowledge knowledge) {
  if (beta == 0) throw Error(ErrorCode::kConfig, "beta must be at least 1");
  AttackerInstance attacker;
  attacker.knowledge_ = knowledge;
  attacker.beta_ = beta;
  attacker.pmf_ = std::move(pmf);
  return attacker;
}

AttackerInstance AttackerInstance::Strongest(const Dataset& dataset,
                                             std::size_t beta) {
  return FromPmf(ComputePmf(dataset, dataset.catalog().All()), beta,
                 AttackerKnowledge::kPopulation);
}

AttackerInstance AttackerInstance::Uniform(const Dataset& dataset,
                                           std::size_t beta) {
  if (beta == 0) throw Error(ErrorCode::kConfig, "beta must be at least 1");
  AttackerInstance attacker;
  attacker.knowledge_ = AttackerKnowledge::kUniform;
  attacker.beta_ = beta;
  const std::size_t n = dataset.catalog().size();
  std::vector<std::set<std::string>> seen(n);
  for (const Observation& obs : dataset.observations()) {
    for (std::size_t a = 0; a < n; ++a) seen[a].insert(obs.values[a]);
  }
  attacker.domains_.reserve(n);
  for (auto& values : seen) {
    attacker.domains_.emplace_back(values.begin(), values.end());
  }
  return attacker;
}

Pmf ParsePmf(std::string_view json_text, const AttributeCatalog& catalog) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("pmf: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("support") ||
      !doc["support"].is_array()) {
    throw Error(ErrorCode::kSchema, "pmf: expected {\"support\": [...]}");
  }
  std::vector<PmfEntry> entries;
  for (std::size_t i = 0; i < doc["support"].size(); ++i) {
    const nlohmann::json& item = doc["support"][i];
    std::string where = "pmf entry " + std::to_string(i);
    if (!item.is_object() || !item.contains("values") ||
        !item["values"].is_object() || !item.contains("probability") ||
        !item["probability"].is_number()) {
      throw Error(ErrorCode::kSchema,
                  where + ": expected {\"values\": {...}, \"probability\": p}");
    }
    PmfEntry entry;
    entry.values.assign(catalog.size(), std::string());
    std::vector<bool> seen(catalog.size(), false);
    for (const auto& [name, value] : item["values"].items()) {
      auto index = catalog.Find(name);
      if (!index) {
        throw Error(ErrorCode::kSchema,
                    where + ": unknown attribute \"" + name + "\"");
      }
      if (!value.is_string()) {
        throw Error(ErrorCode::kSchema,
                    where + ": value of \"" + name + "\" must be a string");
      }
      entry.values[*index] = value.get<std::string>();
      seen[*index] = true;
    }
    for (std::size_t a = 0; a < catalog.size(); ++a) {
      if (!seen[a]) {
        throw Error(ErrorCode::kSchema, where + ": missing attribute \"" +
                                            catalog[a].name + "\"");
      }
    }
    entry.probability = item["probability"].get<double>();
    entries.push_back(std::move(entry));
  }
  return Pmf(catalog.All(), std::move(entries));
}

Pmf LoadPmf(const std::filesystem::path& path,
            const AttributeCatalog& catalog) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParsePmf(buffer.str(), catalog);
}

Dictionary BuildDictionary(const AttackerInstance& attacker,
                           const AttributeSet& attributes) {
  if (attacker.pmf()) {
    return DictionaryFromPmf(*attacker.pmf(), attributes, attacker.beta());
  }
  return DictionaryFromDomains(attacker.domains(), attributes,
                               attacker.beta());
}

UserMapping UserMappingOf(const Dataset& dataset) {
  UserMapping mapping;
  mapping.user_ids = dataset.user_ids();
  mapping.stored.reserve(dataset.num_users());
  for (std::size_t u = 0; u < dataset.num_users(); ++u) {
    mapping.stored.push_back(dataset.StoredFingerprint(u));
  }
  return mapping;
}

struct SensitivityEvaluator::Column {
  std::vector<std::string> domain;
  std::vector<std::uint32_t> codes;
  mutable std::shared_mutex mutex;
  mutable std::unordered_map<std::string, std::vector<char>> masks;
};

SensitivityEvaluator::SensitivityEvaluator(const AttributeCatalog& catalog,
                                           const UserMapping& mapping)
    : catalog_(catalog), num_users_(mapping.stored.size()) {
  if (num_users_ == 0) {
    throw Error(ErrorCode::kPrecondition, "empty user population");
  }
  for (const Fingerprint& fingerprint : mapping.stored) {
    if (fingerprint.size() != catalog.size()) {
      throw Error(ErrorCode::kConfig,
                  "stored fingerprint does not cover the catalog");
    }
  }
  columns_.reserve(catalog.size());
  for (std::size_t a = 0; a < catalog.size(); ++a) {
    auto column = std::make_unique<Column>();
    std::set<std::string> values;
    for (const Fingerprint& fingerprint : mapping.stored) {
      values.insert(fingerprint[a]);
    }
    column->domain.assign(values.begin(), values.end());
    column->codes.reserve(num_users_);
    for (const Fingerprint& fingerprint : mapping.stored) {
      auto it = std::lower_bound(column->domain.begin(), column->domain.end(),
                                 fingerprint[a]);
      column->codes.push_back(
          static_cast<std::uint32_t>(it - column->domain.begin()));
    }
    columns_.push_back(std::move(column));
  }
}

SensitivityEvaluator::~SensitivityEvaluator() = default;

const std::vector<char>& SensitivityEvaluator::MatchMask(
    AttributeIndex attribute, const std::string& submitted) const {
  const Column& column = *columns_.at(attribute);
  {
    std::shared_lock lock(column.mutex);
    auto it = column.masks.find(submitted);
    if (it != column.masks.end()) return it->second;
  }
  std::vector<char> mask(column.domain.size());
  const AttributeSpec& spec = catalog_[attribute];
  for (std::size_t v = 0; v < column.domain.size(); ++v) {
    mask[v] = AttributeMatches(spec, column.domain[v], submitted) ? 1 : 0;
  }
  std::unique_lock lock(column.mutex);
  return column.masks.try_emplace(submitted, std::move(mask)).first->second;
}

std::vector<bool> SensitivityEvaluator::Impersonated(
    const Dictionary& dictionary) const {
  std::vector<bool> impersonated(num_users_, false);
  const AttributeSet& attributes = dictionary.attributes;
  std::vector<const std::vector<char>*> masks(attributes.size());
  std::vector<const std::uint32_t*> codes(attributes.size());
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    codes[i] = columns_.at(attributes[i])->codes.data();
  }
  for (const Fingerprint& submitted : dictionary.entries) {
    if (submitted.size() != attributes.size()) {
      throw Error(ErrorCode::kConfig, "dictionary entry is misaligned");
    }
    for (std::size_t i = 0; i < attributes.size(); ++i) {
      masks[i] = &MatchMask(attributes[i], submitted[i]);
    }
    for (std::size_t u = 0; u < num_users_; ++u) {
      if (impersonated[u]) continue;
      bool all = true;
      for (std::size_t i = 0; i < attributes.size() && all; ++i) {
        all = (*masks[i])[codes[i][u]] != 0;
      }
      if (all) impersonated[u] = true;
    }
  }
  return impersonated;
}

double SensitivityEvaluator::Sensitivity(const Dictionary& dictionary) const {
  std::vector<bool> impersonated = Impersonated(dictionary);
  auto count = std::count(impersonated.begin(), impersonated.end(), true);
  return static_cast<double>(count) / static_cast<double>(num_users_);
}

double Sensitivity(const AttributeSet& attributes,
                   const AttackerInstance& attacker,
                   const UserMapping& mapping,
                   const AttributeCatalog& catalog) {
  SensitivityEvaluator evaluator(catalog, mapping);
  return evaluator.Sensitivity(BuildDictionary(attacker, attributes));
}

std::vector<std::string> ImpersonatedUsers(const AttributeSet& attributes,
                                           const AttackerInstance& attacker,
                                           const UserMapping& mapping,
                                           const AttributeCatalog& catalog) {
  SensitivityEvaluator evaluator(catalog, mapping);
  std::vector<bool> flags =
      evaluator.Impersonated(BuildDictionary(attacker, attributes));
  std::vector<std::string> users;
  for (std::size_t u = 0; u < flags.size(); ++u) {
    if (flags[u]) users.push_back(mapping.user_ids[u]);
  }
  return users;
}

}  // namespace fpselect
