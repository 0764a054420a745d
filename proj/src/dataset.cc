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

#include "fpselect/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fpselect/error.h"

namespace fpselect {

using nlohmann::json;

namespace {

constexpr double kPmfTolerance = 1e-9;

[[noreturn]] void SchemaError(const std::string& message) {
  throw Error(ErrorCode::kSchema, message);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kConfig, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string_view KindName(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::kText:
      return "text";
    case AttributeKind::kSet:
      return "set";
    case AttributeKind::kNumber:
      return "number";
    case AttributeKind::kCategory:
      return "category";
    case AttributeKind::kDynamic:
      return "dynamic";
  }
  return "category";
}

AttributeKind ParseKind(std::string_view name) {
  if (name == "text") return AttributeKind::kText;
  if (name == "set") return AttributeKind::kSet;
  if (name == "number") return AttributeKind::kNumber;
  if (name == "category") return AttributeKind::kCategory;
  if (name == "dynamic") return AttributeKind::kDynamic;
  SchemaError("unknown attribute kind \"" + std::string(name) + "\"");
}

AttributeCatalog::AttributeCatalog(std::vector<AttributeSpec> specs)
    : specs_(std::move(specs)) {
  std::stable_sort(specs_.begin(), specs_.end(),
                   [](const AttributeSpec& a, const AttributeSpec& b) {
                     return a.name < b.name;
                   });
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const AttributeSpec& spec = specs_[i];
    if (spec.name.empty()) SchemaError("attribute with empty name");
    if (i > 0 && specs_[i - 1].name == spec.name) {
      SchemaError("duplicate attribute \"" + spec.name + "\"");
    }
    if (!(spec.match_threshold >= 0.0)) {
      SchemaError("attribute \"" + spec.name + "\": negative match_threshold");
    }
    bool exact_kind = spec.kind == AttributeKind::kCategory ||
                      spec.kind == AttributeKind::kDynamic;
    if (exact_kind && spec.match_threshold >= 1.0) {
      SchemaError("attribute \"" + spec.name +
                  "\": match_threshold must be below 1 for exact-match kinds");
    }
    if (spec.kind == AttributeKind::kSet && spec.set_separator.empty()) {
      SchemaError("attribute \"" + spec.name + "\": empty set_separator");
    }
  }
}

std::optional<AttributeIndex> AttributeCatalog::Find(
    std::string_view name) const {
  auto it = std::lower_bound(
      specs_.begin(), specs_.end(), name,
      [](const AttributeSpec& spec, std::string_view n) { return spec.name < n; });
  if (it == specs_.end() || it->name != name) return std::nullopt;
  return static_cast<AttributeIndex>(it - specs_.begin());
}

AttributeIndex AttributeCatalog::IndexOf(std::string_view name) const {
  if (auto index = Find(name)) return *index;
  throw Error(ErrorCode::kConfig,
              "unknown attribute \"" + std::string(name) + "\"");
}

AttributeSet AttributeCatalog::SetOf(
    const std::vector<std::string>& names) const {
  std::vector<AttributeIndex> indices;
  indices.reserve(names.size());
  for (const std::string& name : names) indices.push_back(IndexOf(name));
  return AttributeSet(std::move(indices));
}

std::vector<std::string> AttributeCatalog::NamesOf(
    const AttributeSet& set) const {
  std::vector<std::string> names;
  names.reserve(set.size());
  for (AttributeIndex index : set) names.push_back(specs_.at(index).name);
  return names;
}

Dataset::Dataset(AttributeCatalog catalog,
                 std::vector<Observation> observations)
    : catalog_(std::move(catalog)), observations_(std::move(observations)) {
  if (observations_.empty()) SchemaError("empty dataset");

  std::map<std::string, std::vector<std::size_t>> by_browser;
  for (std::size_t i = 0; i < observations_.size(); ++i) {
    const Observation& obs = observations_[i];
    std::string where = "observation " + std::to_string(i + 1);
    if (obs.values.size() != catalog_.size()) {
      SchemaError(where + ": expected " + std::to_string(catalog_.size()) +
                  " values, got " + std::to_string(obs.values.size()));
    }
    if (obs.collect_ms.size() != catalog_.size()) {
      SchemaError(where + ": expected " + std::to_string(catalog_.size()) +
                  " collection times, got " +
                  std::to_string(obs.collect_ms.size()));
    }
    for (std::size_t a = 0; a < catalog_.size(); ++a) {
      if (!(obs.collect_ms[a] >= 0.0) || !std::isfinite(obs.collect_ms[a])) {
        SchemaError(where + ": invalid collect_ms for \"" + catalog_[a].name +
                    "\"");
      }
    }
    if (obs.seq < 0) SchemaError(where + ": negative seq");
    std::vector<std::size_t>& history = by_browser[obs.browser_id];
    if (!history.empty() && observations_[history.back()].seq >= obs.seq) {
      SchemaError(where + ": seq " + std::to_string(obs.seq) +
                  " is not increasing for browser \"" + obs.browser_id + "\"");
    }
    history.push_back(i);
  }

  for (const auto& [browser, history] : by_browser) {
    user_ids_.push_back(browser);
    stored_.push_back(history.front());
    for (std::size_t i = 1; i < history.size(); ++i) {
      pairs_.emplace_back(history[i - 1], history[i]);
    }
  }
}

Fingerprint Dataset::FingerprintOf(std::size_t observation,
                                   const AttributeSet& attributes) const {
  const Observation& obs = observations_.at(observation);
  Fingerprint out;
  out.reserve(attributes.size());
  for (AttributeIndex a : attributes) out.push_back(obs.values.at(a));
  return out;
}

AttributeCatalog ParseCatalog(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    SchemaError(std::string("catalog: ") + e.what());
  }
  if (!doc.is_array()) SchemaError("catalog: expected a JSON array");
  std::vector<AttributeSpec> specs;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& item = doc[i];
    std::string where = "catalog entry " + std::to_string(i);
    if (!item.is_object()) SchemaError(where + ": expected an object");
    for (const auto& [key, unused] : item.items()) {
      if (key != "name" && key != "kind" && key != "async" &&
          key != "set_separator" && key != "match_threshold") {
        SchemaError(where + ": unknown field \"" + key + "\"");
      }
    }
    AttributeSpec spec;
    if (!item.contains("name") || !item["name"].is_string()) {
      SchemaError(where + ": missing string field \"name\"");
    }
    spec.name = item["name"].get<std::string>();
    if (!item.contains("kind") || !item["kind"].is_string()) {
      SchemaError(where + ": missing string field \"kind\"");
    }
    spec.kind = ParseKind(item["kind"].get<std::string>());
    if (!item.contains("async") || !item["async"].is_boolean()) {
      SchemaError(where + ": missing boolean field \"async\"");
    }
    spec.is_async = item["async"].get<bool>();
    if (item.contains("set_separator")) {
      if (!item["set_separator"].is_string()) {
        SchemaError(where + ": \"set_separator\" must be a string");
      }
      spec.set_separator = item["set_separator"].get<std::string>();
    }
    if (item.contains("match_threshold")) {
      if (!item["match_threshold"].is_number()) {
        SchemaError(where + ": \"match_threshold\" must be a number");
      }
      spec.match_threshold = item["match_threshold"].get<double>();
    }
    specs.push_back(std::move(spec));
  }
  return AttributeCatalog(std::move(specs));
}

AttributeCatalog LoadCatalog(const std::filesystem::path& path) {
  return ParseCatalog(ReadFile(path));
}

std::string CatalogToJson(const AttributeCatalog& catalog) {
  json doc = json::array();
  for (const AttributeSpec& spec : catalog.specs()) {
    json item = {{"name", spec.name},
                 {"kind", std::string(KindName(spec.kind))},
                 {"async", spec.is_async},
                 {"match_threshold", spec.match_threshold}};
    if (spec.kind == AttributeKind::kSet) {
      item["set_separator"] = spec.set_separator;
    }
    doc.push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

Dataset ParseDataset(std::istream& jsonl, AttributeCatalog catalog) {
  std::vector<Observation> observations;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(jsonl, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = "line " + std::to_string(line_number);
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception& e) {
      SchemaError(where + ": " + e.what());
    }
    if (!row.is_object()) SchemaError(where + ": expected a JSON object");
    for (const auto& [key, unused] : row.items()) {
      if (key != "browser_id" && key != "seq" && key != "values" &&
          key != "collect_ms") {
        SchemaError(where + ": unknown field \"" + key + "\"");
      }
    }
    Observation obs;
    if (!row.contains("browser_id") || !row["browser_id"].is_string()) {
      SchemaError(where + ": missing string field \"browser_id\"");
    }
    obs.browser_id = row["browser_id"].get<std::string>();
    if (!row.contains("seq") || !row["seq"].is_number_integer()) {
      SchemaError(where + ": missing integer field \"seq\"");
    }
    obs.seq = row["seq"].get<std::int64_t>();

    if (!row.contains("values") || !row["values"].is_object()) {
      SchemaError(where + ": missing object field \"values\"");
    }
    obs.values.assign(catalog.size(), std::string());
    std::vector<bool> seen(catalog.size(), false);
    for (const auto& [name, value] : row["values"].items()) {
      auto index = catalog.Find(name);
      if (!index) {
        SchemaError(where + ": unknown attribute \"" + name + "\" in values");
      }
      if (!value.is_string()) {
        SchemaError(where + ": value of \"" + name + "\" must be a string");
      }
      obs.values[*index] = value.get<std::string>();
      seen[*index] = true;
    }
    for (std::size_t a = 0; a < catalog.size(); ++a) {
      if (!seen[a]) {
        SchemaError(where + ": missing value for attribute \"" +
                    catalog[a].name + "\"");
      }
    }

    obs.collect_ms.assign(catalog.size(), 0.0);
    if (row.contains("collect_ms")) {
      if (!row["collect_ms"].is_object()) {
        SchemaError(where + ": \"collect_ms\" must be an object");
      }
      for (const auto& [name, value] : row["collect_ms"].items()) {
        auto index = catalog.Find(name);
        if (!index) {
          SchemaError(where + ": unknown attribute \"" + name +
                      "\" in collect_ms");
        }
        if (!value.is_number() || value.get<double>() < 0.0) {
          SchemaError(where + ": collect_ms of \"" + name +
                      "\" must be a non-negative number");
        }
        obs.collect_ms[*index] = value.get<double>();
      }
    }
    observations.push_back(std::move(obs));
  }
  return Dataset(std::move(catalog), std::move(observations));
}

Dataset LoadDataset(const std::filesystem::path& dataset_path,
                    const std::filesystem::path& catalog_path) {
  AttributeCatalog catalog = LoadCatalog(catalog_path);
  std::ifstream in(dataset_path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kConfig, "cannot open " + dataset_path.string());
  }
  return ParseDataset(in, std::move(catalog));
}

void WriteDataset(const Dataset& dataset, std::ostream& out) {
  const AttributeCatalog& catalog = dataset.catalog();
  for (const Observation& obs : dataset.observations()) {
    json values = json::object();
    json times = json::object();
    for (std::size_t a = 0; a < catalog.size(); ++a) {
      values[catalog[a].name] = obs.values[a];
      times[catalog[a].name] = obs.collect_ms[a];
    }
    json row = {{"browser_id", obs.browser_id},
                {"seq", obs.seq},
                {"values", std::move(values)},
                {"collect_ms", std::move(times)}};
    out << row.dump() << "\n";
  }
}

Fingerprint Project(const Fingerprint& fingerprint, const AttributeSet& from,
                    const AttributeSet& to) {
  if (fingerprint.size() != from.size()) {
    throw Error(ErrorCode::kConfig,
                "fingerprint has " + std::to_string(fingerprint.size()) +
                    " values for " + std::to_string(from.size()) +
                    " attributes");
  }
  Fingerprint out;
  out.reserve(to.size());
  for (std::size_t position : from.PositionsOf(to)) {
    out.push_back(fingerprint[position]);
  }
  return out;
}

Pmf::Pmf(AttributeSet attributes, std::vector<PmfEntry> entries)
    : attributes_(std::move(attributes)), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const PmfEntry& a, const PmfEntry& b) {
              return a.values < b.values;
            });
  double total = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const PmfEntry& entry = entries_[i];
    if (entry.values.size() != attributes_.size()) {
      SchemaError("pmf entry has " + std::to_string(entry.values.size()) +
                  " values for " + std::to_string(attributes_.size()) +
                  " attributes");
    }
    if (!(entry.probability > 0.0 && entry.probability <= 1.0 + kPmfTolerance)) {
      SchemaError("pmf probability outside (0, 1]");
    }
    if (i > 0 && entries_[i - 1].values == entry.values) {
      SchemaError("pmf support entries are not unique");
    }
    total += entry.probability;
  }
  if (std::abs(total - 1.0) > kPmfTolerance) {
    SchemaError("pmf probabilities sum to " + std::to_string(total));
  }
}

Pmf Pmf::Project(const AttributeSet& to) const {
  std::vector<std::size_t> positions = attributes_.PositionsOf(to);
  std::map<Fingerprint, double> collapsed;
  for (const PmfEntry& entry : entries_) {
    Fingerprint projected;
    projected.reserve(positions.size());
    for (std::size_t p : positions) projected.push_back(entry.values[p]);
    collapsed[std::move(projected)] += entry.probability;
  }
  Pmf out;
  out.attributes_ = to;
  out.entries_.reserve(collapsed.size());
  for (auto& [values, probability] : collapsed) {
    out.entries_.push_back({values, probability});
  }
  return out;
}

Pmf ComputePmf(const Dataset& dataset, const AttributeSet& attributes) {
  if (dataset.num_users() == 0) {
    throw Error(ErrorCode::kPrecondition, "empty user set");
  }
  if (!attributes.IsSubsetOf(dataset.catalog().All())) {
    throw Error(ErrorCode::kConfig, "attribute set " +
                                        attributes.DebugString() +
                                        " exceeds the catalog");
  }
  std::map<Fingerprint, std::size_t> counts;
  for (std::size_t observation : dataset.stored_observations()) {
    ++counts[dataset.FingerprintOf(observation, attributes)];
  }
  const double users = static_cast<double>(dataset.num_users());
  std::vector<PmfEntry> entries;
  entries.reserve(counts.size());
  for (const auto& [values, count] : counts) {
    entries.push_back({values, static_cast<double>(count) / users});
  }
  return Pmf(attributes, std::move(entries));
}

double Entropy(const Pmf& pmf) {
  double h = 0.0;
  for (const PmfEntry& entry : pmf.entries()) {
    h -= entry.probability * std::log2(entry.probability);
  }
  return h <= 0.0 ? 0.0 : h;
}

std::vector<std::pair<Fingerprint, Fingerprint>> ConsecutivePairs(
    const Dataset& dataset) {
  AttributeSet all = dataset.catalog().All();
  std::vector<std::pair<Fingerprint, Fingerprint>> pairs;
  pairs.reserve(dataset.consecutive_observation_pairs().size());
  for (const auto& [first, second] : dataset.consecutive_observation_pairs()) {
    pairs.emplace_back(dataset.FingerprintOf(first, all),
                       dataset.FingerprintOf(second, all));
  }
  return pairs;
}

}  // namespace fpselect
