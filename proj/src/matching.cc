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

#include "fpselect/matching.h"

#include <algorithm>
#include <charconv>
#include <iterator>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <tuple>

#include <json.hpp>

#include "fpselect/error.h"

namespace fpselect {

namespace {

// Lenient UTF-8 decoding; invalid bytes become single code units.
std::u32string DecodeUtf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    int extra = -1;
    if (c < 0x80) {
      extra = 0;
    } else if ((c >> 5) == 0x6) {
      extra = 1;
    } else if ((c >> 4) == 0xE) {
      extra = 2;
    } else if ((c >> 3) == 0x1E) {
      extra = 3;
    }
    if (extra <= 0 || i + static_cast<std::size_t>(extra) >= s.size()) {
      out.push_back(c);
      ++i;
      continue;
    }
    char32_t cp = c & (0x3F >> extra);
    bool valid = true;
    for (int k = 1; k <= extra; ++k) {
      unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) {
        valid = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!valid) {
      out.push_back(c);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::set<std::string_view> SplitSet(std::string_view value,
                                    std::string_view separator) {
  std::set<std::string_view> tokens;
  if (value.empty()) return tokens;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = value.find(separator, start);
    std::string_view token = value.substr(
        start, pos == std::string_view::npos ? std::string_view::npos
                                             : pos - start);
    if (!token.empty()) tokens.insert(token);
    if (pos == std::string_view::npos) break;
    start = pos + separator.size();
  }
  return tokens;
}

double ParseNumber(std::string_view value) {
  std::string_view trimmed = value;
  while (!trimmed.empty() && trimmed.front() == ' ') trimmed.remove_prefix(1);
  while (!trimmed.empty() && trimmed.back() == ' ') trimmed.remove_suffix(1);
  if (!trimmed.empty() && trimmed.front() == '+') trimmed.remove_prefix(1);
  double out = 0.0;
  auto [ptr, ec] =
      std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), out);
  if (trimmed.empty() || ec != std::errc() ||
      ptr != trimmed.data() + trimmed.size() || !std::isfinite(out)) {
    throw Error(ErrorCode::kParse,
                "not a number: \"" + std::string(value) + "\"");
  }
  return out;
}

}  // namespace

DistanceKind DistanceKindFor(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::kText:
      return DistanceKind::kEditDistance;
    case AttributeKind::kSet:
      return DistanceKind::kJaccardOnSets;
    case AttributeKind::kNumber:
      return DistanceKind::kAbsoluteDifference;
    case AttributeKind::kCategory:
    case AttributeKind::kDynamic:
      return DistanceKind::kKroneckerComplement;
  }
  return DistanceKind::kKroneckerComplement;
}

std::size_t EditDistance(std::string_view a, std::string_view b) {
  if (a == b) return 0;
  std::u32string x = DecodeUtf8(a);
  std::u32string y = DecodeUtf8(b);
  if (x.size() < y.size()) std::swap(x, y);
  std::vector<std::size_t> row(y.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= x.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      std::size_t above = row[j];
      std::size_t substitution = diagonal + (x[i - 1] == y[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitution});
      diagonal = above;
    }
  }
  return row[y.size()];
}

double Distance(DistanceKind kind, std::string_view x, std::string_view y,
                std::string_view separator) {
  switch (kind) {
    case DistanceKind::kEditDistance:
      return static_cast<double>(EditDistance(x, y));
    case DistanceKind::kJaccardOnSets: {
      if (separator.empty()) {
        throw Error(ErrorCode::kConfig, "empty set separator");
      }
      std::set<std::string_view> sx = SplitSet(x, separator);
      std::set<std::string_view> sy = SplitSet(y, separator);
      std::size_t common = 0;
      for (std::string_view token : sx) common += sy.count(token);
      std::size_t all = sx.size() + sy.size() - common;
      if (all == 0) return 0.0;
      return 1.0 - static_cast<double>(common) / static_cast<double>(all);
    }
    case DistanceKind::kAbsoluteDifference:
      return std::abs(ParseNumber(x) - ParseNumber(y));
    case DistanceKind::kKroneckerComplement:
      return x == y ? 0.0 : 1.0;
  }
  return x == y ? 0.0 : 1.0;
}

double Distance(const AttributeSpec& spec, std::string_view x,
                std::string_view y) {
  return Distance(DistanceKindFor(spec.kind), x, y, spec.set_separator);
}

bool AttributeMatches(const AttributeSpec& spec, std::string_view stored,
                      std::string_view submitted) {
  if (stored == submitted) return true;
  if (spec.kind == AttributeKind::kDynamic) return false;
  try {
    return Distance(spec, stored, submitted) <= spec.match_threshold;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) return false;
    throw;
  }
}

bool FingerprintsMatch(const AttributeSet& attributes,
                       const AttributeCatalog& catalog,
                       const Fingerprint& stored,
                       const Fingerprint& submitted) {
  if (stored.size() != attributes.size() ||
      submitted.size() != attributes.size()) {
    throw Error(ErrorCode::kConfig,
                "fingerprint tuples do not match attribute set " +
                    attributes.DebugString());
  }
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (!AttributeMatches(catalog[attributes[i]], stored[i], submitted[i])) {
      return false;
    }
  }
  return true;
}

double MaxMarginThreshold(std::vector<double> positives,
                          std::vector<double> negatives) {
  if (positives.empty() || negatives.empty()) {
    throw Error(ErrorCode::kPrecondition,
                "threshold calibration needs both classes");
  }
  std::sort(positives.begin(), positives.end());
  std::sort(negatives.begin(), negatives.end());
  std::vector<double> values;
  values.reserve(positives.size() + negatives.size());
  std::merge(positives.begin(), positives.end(), negatives.begin(),
             negatives.end(), std::back_inserter(values));
  values.erase(std::unique(values.begin(), values.end()), values.end());

  // Cut c accepts distances <= values[c - 1]; c = 0 accepts nothing below the
  // smallest value and c = m accepts everything.
  struct Candidate {
    std::size_t errors;
    double margin;
    double threshold;
  };
  auto better = [](const Candidate& a, const Candidate& b) {
    if (a.errors != b.errors) return a.errors < b.errors;
    if (a.margin != b.margin) return a.margin > b.margin;
    return a.threshold < b.threshold;
  };
  const std::size_t m = values.size();
  std::optional<Candidate> best;
  for (std::size_t c = 0; c <= m; ++c) {
    // Distances are non-negative, so no threshold rejects a distance of 0.
    if (c == 0 && values[0] <= 0.0) continue;
    std::size_t rejected_positives = 0;
    std::size_t accepted_negatives = 0;
    if (c == 0) {
      rejected_positives = positives.size();
    } else {
      double cut = values[c - 1];
      rejected_positives = positives.end() - std::upper_bound(positives.begin(),
                                                              positives.end(),
                                                              cut);
      accepted_negatives = std::upper_bound(negatives.begin(), negatives.end(),
                                            cut) -
                           negatives.begin();
    }
    Candidate candidate{rejected_positives + accepted_negatives, 0.0, 0.0};
    if (c == 0) {
      candidate.threshold = values[0] / 2.0;
    } else if (c == m) {
      candidate.threshold = values[m - 1];
    } else {
      candidate.margin = values[c] - values[c - 1];
      candidate.threshold = (values[c] + values[c - 1]) / 2.0;
    }
    if (!best || better(candidate, *best)) best = candidate;
  }
  return best->threshold;
}

CalibrationReport CalibrateThresholds(const Dataset& dataset,
                                      const CalibrationOptions& options) {
  if (options.windows == 0) {
    throw Error(ErrorCode::kConfig, "windows must be at least 1");
  }
  if (dataset.num_users() < 2) {
    throw Error(ErrorCode::kPrecondition,
                "calibration needs at least two browsers");
  }
  const std::vector<Observation>& observations = dataset.observations();
  const std::size_t n = observations.size();
  if (options.windows > n) {
    throw Error(ErrorCode::kConfig, "more windows than observations");
  }
  const AttributeCatalog& catalog = dataset.catalog();

  struct WindowPairs {
    std::vector<std::pair<std::size_t, std::size_t>> positives;
    std::vector<std::pair<std::size_t, std::size_t>> negatives;
  };
  std::vector<WindowPairs> windows(options.windows);
  auto window_of = [&](std::size_t observation) {
    return observation * options.windows / n;
  };
  for (const auto& pair : dataset.consecutive_observation_pairs()) {
    windows[window_of(pair.second)].positives.push_back(pair);
  }
  for (std::size_t w = 0; w < options.windows; ++w) {
    WindowPairs& window = windows[w];
    std::size_t begin = (w * n + options.windows - 1) / options.windows;
    std::size_t end = ((w + 1) * n + options.windows - 1) / options.windows;
    if (window.positives.empty()) {
      throw Error(ErrorCode::kPrecondition,
                  "window " + std::to_string(w) + " has no consecutive pairs");
    }
    bool mixed = false;
    for (std::size_t i = begin + 1; i < end && !mixed; ++i) {
      mixed = observations[i].browser_id != observations[begin].browser_id;
    }
    if (!mixed) {
      throw Error(ErrorCode::kPrecondition,
                  "window " + std::to_string(w) +
                      " holds a single browser; no negative pairs");
    }
    std::mt19937_64 rng(options.seed * 0x9E3779B97F4A7C15ULL + w + 1);
    std::uniform_int_distribution<std::size_t> pick(begin, end - 1);
    std::size_t wanted = std::min(window.positives.size(), options.negative_cap);
    while (window.negatives.size() < wanted) {
      std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      if (observations[i].browser_id == observations[j].browser_id) continue;
      window.negatives.emplace_back(i, j);
    }
  }

  CalibrationReport report;
  report.windows = options.windows;
  report.seed = options.seed;
  for (std::size_t a = 0; a < catalog.size(); ++a) {
    const AttributeSpec& spec = catalog[a];
    AttributeCalibration calibration;
    calibration.name = spec.name;
    calibration.kind = spec.kind;
    for (const WindowPairs& window : windows) {
      double threshold = 0.0;
      if (spec.kind != AttributeKind::kDynamic) {
        auto distances = [&](const auto& pairs) {
          std::vector<double> out;
          out.reserve(pairs.size());
          for (const auto& [i, j] : pairs) {
            out.push_back(Distance(spec, observations[i].values[a],
                                   observations[j].values[a]));
          }
          return out;
        };
        threshold = MaxMarginThreshold(distances(window.positives),
                                       distances(window.negatives));
        // Category distances are 0 or 1, so anything in [0, 1) is exact
        // matching; 1 would accept every pair.
        if (spec.kind == AttributeKind::kCategory) {
          threshold = std::min(threshold, 0.5);
        }
      }
      calibration.window_thresholds.push_back(threshold);
    }
    calibration.threshold =
        std::accumulate(calibration.window_thresholds.begin(),
                        calibration.window_thresholds.end(), 0.0) /
        static_cast<double>(calibration.window_thresholds.size());
    report.attributes.push_back(std::move(calibration));
  }
  return report;
}

AttributeCatalog ApplyCalibration(const AttributeCatalog& catalog,
                                  const CalibrationReport& report) {
  std::vector<AttributeSpec> specs = catalog.specs();
  for (const AttributeCalibration& calibration : report.attributes) {
    specs[catalog.IndexOf(calibration.name)].match_threshold =
        calibration.threshold;
  }
  return AttributeCatalog(std::move(specs));
}

std::string CalibrationReportToJson(const CalibrationReport& report) {
  nlohmann::json attributes = nlohmann::json::array();
  for (const AttributeCalibration& calibration : report.attributes) {
    attributes.push_back({{"name", calibration.name},
                          {"kind", std::string(KindName(calibration.kind))},
                          {"window_thresholds", calibration.window_thresholds},
                          {"threshold", calibration.threshold}});
  }
  nlohmann::json doc = {{"windows", report.windows},
                        {"seed", report.seed},
                        {"attributes", std::move(attributes)}};
  return doc.dump(2) + "\n";
}

}  // namespace fpselect
