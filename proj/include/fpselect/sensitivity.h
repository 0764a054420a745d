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

// Dictionary attacker model and the impersonation-rate sensitivity measure.
//
// The attacker knows a fingerprint distribution and submits, for a probe C,
// the beta most probable fingerprints projected onto C. A user is
// impersonated when any submitted fingerprint matches the user's stored
// fingerprint on every attribute of C.

#ifndef FPSELECT_SENSITIVITY_H_
#define FPSELECT_SENSITIVITY_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpselect/attribute_set.h"
#include "fpselect/dataset.h"

namespace fpselect {

enum class AttackerKnowledge { kPopulation, kUniform, kFile };

std::string_view KnowledgeName(AttackerKnowledge knowledge);
// Throws Error(kConfig) on an unknown name.
AttackerKnowledge ParseKnowledge(std::string_view name);

class AttackerInstance {
 public:
  // `pmf` must be defined over every attribute a dictionary will be built
  // for. Throws Error(kConfig) when beta is 0.
  static AttackerInstance FromPmf(Pmf pmf, std::size_t beta,
                                  AttackerKnowledge knowledge =
                                      AttackerKnowledge::kFile);

  // Knows the exact distribution of the defended users' fingerprints.
  static AttackerInstance Strongest(const Dataset& dataset, std::size_t beta);

  // Uniform over the Cartesian product of each attribute's observed values.
  // All candidates are equally likely, so its dictionary is the
  // lexicographically first beta tuples of the product.
  static AttackerInstance Uniform(const Dataset& dataset, std::size_t beta);

  std::size_t beta() const { return beta_; }
  AttackerKnowledge knowledge() const { return knowledge_; }
  const std::optional<Pmf>& pmf() const { return pmf_; }
  const std::vector<std::vector<std::string>>& domains() const {
    return domains_;
  }

 private:
  AttackerInstance() = default;

  AttackerKnowledge knowledge_ = AttackerKnowledge::kPopulation;
  std::size_t beta_ = 1;
  std::optional<Pmf> pmf_;
  std::vector<std::vector<std::string>> domains_;
};

// Pmf file: {"support": [{"values": {attr: str}, "probability": p}, ...]}
// covering every catalog attribute.
Pmf ParsePmf(std::string_view json_text, const AttributeCatalog& catalog);
Pmf LoadPmf(const std::filesystem::path& path,
            const AttributeCatalog& catalog);

struct Dictionary {
  AttributeSet attributes;
  // Unique fingerprints over `attributes`, most probable first; equal
  // probabilities are ordered lexicographically.
  std::vector<Fingerprint> entries;
};

Dictionary BuildDictionary(const AttackerInstance& attacker,
                           const AttributeSet& attributes);

// Users and their stored fingerprint over the whole catalog.
struct UserMapping {
  std::vector<std::string> user_ids;
  std::vector<Fingerprint> stored;
};

UserMapping UserMappingOf(const Dataset& dataset);

// Matches dictionaries against a fixed user population. Per-attribute values
// are interned and match results cached, so repeated evaluations over many
// attribute sets stay cheap. Safe for concurrent use.
class SensitivityEvaluator {
 public:
  SensitivityEvaluator(const AttributeCatalog& catalog,
                       const UserMapping& mapping);
  ~SensitivityEvaluator();

  std::size_t num_users() const { return num_users_; }

  // One flag per user.
  std::vector<bool> Impersonated(const Dictionary& dictionary) const;
  double Sensitivity(const Dictionary& dictionary) const;

 private:
  struct Column;

  // Flags over the column's domain: does domain value v accept `submitted`.
  const std::vector<char>& MatchMask(AttributeIndex attribute,
                                     const std::string& submitted) const;

  AttributeCatalog catalog_;
  std::size_t num_users_ = 0;
  std::vector<std::unique_ptr<Column>> columns_;
};

// Share of users impersonated. Throws Error(kPrecondition) on an empty
// mapping.
double Sensitivity(const AttributeSet& attributes,
                   const AttackerInstance& attacker,
                   const UserMapping& mapping,
                   const AttributeCatalog& catalog);

std::vector<std::string> ImpersonatedUsers(const AttributeSet& attributes,
                                           const AttackerInstance& attacker,
                                           const UserMapping& mapping,
                                           const AttributeCatalog& catalog);

}  // namespace fpselect

#endif  // FPSELECT_SENSITIVITY_H_
