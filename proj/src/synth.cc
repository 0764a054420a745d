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

#include "fpselect/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

#include "fpselect/error.h"

namespace fpselect {

namespace {

[[noreturn]] void ConfigError(const std::string& message) {
  throw Error(ErrorCode::kConfig, "synth config: " + message);
}

std::string ValueString(const SynthAttribute& attr, std::size_t index) {
  if (attr.kind == AttributeKind::kSet) {
    // Tokens for the set bits of index + 1, so every value is non-empty.
    std::string out;
    std::size_t bits = index + 1;
    for (std::size_t j = 0; bits != 0; ++j, bits >>= 1) {
      if ((bits & 1) == 0) continue;
      if (!out.empty()) out += ";";
      out += "t" + std::to_string(j);
    }
    return out;
  }
  std::string base = attr.kind == AttributeKind::kNumber
                         ? std::to_string(index * 10)
                         : std::to_string(index);
  if (base.size() < attr.mean_size) {
    base.insert(0, attr.mean_size - base.size(), '0');
  }
  return base;
}

}  // namespace

void SynthConfig::Validate() const {
  if (browsers == 0) ConfigError("browsers must be at least 1");
  if (min_observations == 0 || min_observations > max_observations) {
    ConfigError("observations_per_browser must satisfy 1 <= min <= max");
  }
  std::set<std::string> names;
  for (const SynthAttribute& attr : attributes) {
    if (!names.insert(attr.name).second) {
      ConfigError("duplicate attribute \"" + attr.name + "\"");
    }
    if (attr.cardinality == 0) {
      ConfigError("attribute \"" + attr.name + "\": cardinality must be >= 1");
    }
    if (!(attr.zipf >= 0.0) || !std::isfinite(attr.zipf)) {
      ConfigError("attribute \"" + attr.name + "\": zipf must be >= 0");
    }
    if (!(attr.change_prob >= 0.0 && attr.change_prob <= 1.0)) {
      ConfigError("attribute \"" + attr.name +
                  "\": change_prob must lie in [0, 1]");
    }
    if (!(attr.mean_ms >= 0.0) || !std::isfinite(attr.mean_ms)) {
      ConfigError("attribute \"" + attr.name + "\": mean_ms must be >= 0");
    }
    if (attr.mean_size == 0) {
      ConfigError("attribute \"" + attr.name + "\": mean_size must be >= 1");
    }
  }
  std::set<std::string> targets;
  std::set<std::string> sources;
  for (const auto& [source, target] : correlations) {
    if (!names.contains(source) || !names.contains(target)) {
      ConfigError("correlation references an unknown attribute");
    }
    if (source == target) ConfigError("attribute correlated with itself");
    if (!targets.insert(target).second) {
      ConfigError("attribute \"" + target + "\" has two correlation sources");
    }
    sources.insert(source);
  }
  for (const std::string& target : targets) {
    if (sources.contains(target)) {
      ConfigError("correlation target \"" + target + "\" is also a source");
    }
  }
}

SynthConfig ParseSynthConfig(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    ConfigError(e.what());
  }
  SynthConfig config;
  try {
    config.browsers = doc.at("browsers").get<std::size_t>();
    if (doc.contains("observations_per_browser")) {
      const auto& range = doc["observations_per_browser"];
      config.min_observations = range.at(0).get<std::size_t>();
      config.max_observations = range.at(1).get<std::size_t>();
    }
    for (const auto& item : doc.at("attributes")) {
      SynthAttribute attr;
      attr.name = item.at("name").get<std::string>();
      attr.kind = ParseKind(item.value("kind", std::string("category")));
      attr.is_async = item.value("async", false);
      attr.match_threshold = item.value("match_threshold", 0.0);
      attr.cardinality = item.value("cardinality", std::size_t{2});
      attr.zipf = item.value("zipf", 1.0);
      attr.change_prob = item.value("change_prob", 0.0);
      attr.mean_ms = item.value("mean_ms", 1.0);
      attr.mean_size = item.value("mean_size", std::size_t{4});
      config.attributes.push_back(std::move(attr));
    }
    if (doc.contains("correlations")) {
      for (const auto& pair : doc["correlations"]) {
        config.correlations.emplace_back(pair.at(0).get<std::string>(),
                                         pair.at(1).get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    ConfigError(e.what());
  } catch (const Error& e) {
    ConfigError(e.what());
  }
  config.Validate();
  return config;
}

Dataset Synthesize(const SynthConfig& config, std::uint64_t seed) {
  config.Validate();
  std::vector<AttributeSpec> specs;
  for (const SynthAttribute& attr : config.attributes) {
    specs.push_back({attr.name, attr.kind, attr.is_async,
                     attr.match_threshold, ";"});
  }
  AttributeCatalog catalog(std::move(specs));
  const std::size_t n = catalog.size();

  // Generator parameters in catalog order.
  std::vector<const SynthAttribute*> attrs(n);
  for (const SynthAttribute& attr : config.attributes) {
    attrs[catalog.IndexOf(attr.name)] = &attr;
  }
  std::vector<std::ptrdiff_t> source_of(n, -1);
  for (const auto& [source, target] : config.correlations) {
    source_of[catalog.IndexOf(target)] = catalog.IndexOf(source);
  }

  std::mt19937_64 rng(seed);
  std::vector<std::discrete_distribution<std::size_t>> draw;
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<double> weights(attrs[a]->cardinality);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      weights[i] = 1.0 / std::pow(static_cast<double>(i + 1), attrs[a]->zipf);
    }
    draw.emplace_back(weights.begin(), weights.end());
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> count(config.min_observations,
                                                   config.max_observations);

  struct Timed {
    double instant;
    Observation obs;
  };
  std::vector<Timed> rows;
  std::vector<std::size_t> index(n);
  const int width = std::max<int>(
      5, static_cast<int>(std::to_string(config.browsers).size()));
  for (std::size_t b = 0; b < config.browsers; ++b) {
    char id[32];
    std::snprintf(id, sizeof(id), "b%0*zu", width, b);
    std::size_t observations = count(rng);
    std::vector<double> instants(observations);
    for (double& t : instants) t = unit(rng);
    std::sort(instants.begin(), instants.end());

    for (std::size_t o = 0; o < observations; ++o) {
      for (std::size_t a = 0; a < n; ++a) {
        if (source_of[a] >= 0) continue;
        if (o == 0) {
          index[a] = draw[a](rng);
        } else if (attrs[a]->cardinality > 1 &&
                   unit(rng) < attrs[a]->change_prob) {
          std::size_t next = draw[a](rng);
          for (int retry = 0; next == index[a] && retry < 32; ++retry) {
            next = draw[a](rng);
          }
          if (next == index[a]) next = (index[a] + 1) % attrs[a]->cardinality;
          index[a] = next;
        }
      }
      for (std::size_t a = 0; a < n; ++a) {
        if (source_of[a] >= 0) {
          index[a] = index[source_of[a]] % attrs[a]->cardinality;
        }
      }
      Observation obs;
      obs.browser_id = id;
      obs.seq = static_cast<std::int64_t>(o);
      obs.values.reserve(n);
      obs.collect_ms.reserve(n);
      for (std::size_t a = 0; a < n; ++a) {
        obs.values.push_back(ValueString(*attrs[a], index[a]));
        obs.collect_ms.push_back(attrs[a]->mean_ms * (0.5 + unit(rng)));
      }
      rows.push_back({instants[o], std::move(obs)});
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Timed& x, const Timed& y) {
                     return x.instant < y.instant;
                   });
  std::vector<Observation> observations;
  observations.reserve(rows.size());
  for (Timed& row : rows) observations.push_back(std::move(row.obs));
  return Dataset(std::move(catalog), std::move(observations));
}

}  // namespace fpselect
