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

#ifndef FPSELECT_SYNTH_H_
#define FPSELECT_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fpselect/dataset.h"

namespace fpselect {

struct SynthAttribute {
  std::string name;
  AttributeKind kind = AttributeKind::kCategory;
  bool is_async = false;
  double match_threshold = 0.0;
  // Number of distinct values, drawn with P(i) ∝ 1 / (i + 1)^zipf.
  std::size_t cardinality = 2;
  double zipf = 1.0;
  // Chance that the value is redrawn between two consecutive observations.
  double change_prob = 0.0;
  // Collection time is uniform in [0.5, 1.5] × mean_ms.
  double mean_ms = 1.0;
  // Values are padded to this many bytes (set values excepted).
  std::size_t mean_size = 4;
};

struct SynthConfig {
  std::size_t browsers = 100;
  std::size_t min_observations = 1;
  std::size_t max_observations = 3;
  std::vector<SynthAttribute> attributes;
  // (source, target): target's value is a deterministic function of the
  // source's value index. Injective when target cardinality >= source's.
  std::vector<std::pair<std::string, std::string>> correlations;

  // Throws Error(kConfig) on invalid cardinalities, probabilities, counts,
  // or correlation references.
  void Validate() const;
};

// {"browsers", "observations_per_browser": [min, max], "attributes": [...],
//  "correlations": [[source, target], ...]}
SynthConfig ParseSynthConfig(std::string_view json_text);

// Deterministic for a fixed (config, seed). Observations are ordered by a
// simulated collection instant, so contiguous chunks mix browsers.
Dataset Synthesize(const SynthConfig& config, std::uint64_t seed);

}  // namespace fpselect

#endif  // FPSELECT_SYNTH_H_
