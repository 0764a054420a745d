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

// Fingerprint datasets: the attribute catalog, browser observations, the
// user mapping (one stored fingerprint per browser), and fingerprint
// distributions projected onto attribute subsets.

#ifndef FPSELECT_DATASET_H_
#define FPSELECT_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fpselect/attribute_set.h"

namespace fpselect {

enum class AttributeKind { kText, kSet, kNumber, kCategory, kDynamic };

std::string_view KindName(AttributeKind kind);
// Throws Error(kSchema) on an unknown name.
AttributeKind ParseKind(std::string_view name);

struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::kCategory;
  // Collected asynchronously (A_async) rather than sequentially (A_seq).
  bool is_async = false;
  // Largest distance still accepted as the same browser.
  double match_threshold = 0.0;
  // Token separator for set-kind values.
  std::string set_separator = ";";
};

// The candidate attributes in canonical order (lexicographic by name).
class AttributeCatalog {
 public:
  AttributeCatalog() = default;
  // Sorts by name. Throws Error(kSchema) on duplicate or empty names, a
  // negative threshold, or an exact-match kind with threshold >= 1.
  explicit AttributeCatalog(std::vector<AttributeSpec> specs);

  std::size_t size() const { return specs_.size(); }
  const AttributeSpec& operator[](std::size_t i) const { return specs_[i]; }
  const std::vector<AttributeSpec>& specs() const { return specs_; }

  AttributeSet All() const { return AttributeSet::Full(specs_.size()); }

  std::optional<AttributeIndex> Find(std::string_view name) const;
  // Throws Error(kConfig) naming the attribute when absent.
  AttributeIndex IndexOf(std::string_view name) const;

  AttributeSet SetOf(const std::vector<std::string>& names) const;
  std::vector<std::string> NamesOf(const AttributeSet& set) const;

 private:
  std::vector<AttributeSpec> specs_;
};

// A tuple of attribute values, aligned with some AttributeSet.
using Fingerprint = std::vector<std::string>;

struct Observation {
  std::string browser_id;
  std::int64_t seq = 0;
  // One entry per catalog attribute, in catalog order.
  std::vector<std::string> values;
  // Collection time of each attribute in milliseconds, in catalog order.
  std::vector<double> collect_ms;
};

// Immutable validated dataset.
//
// Users are the distinct browsers, ordered by browser id. Each user's stored
// fingerprint is the browser's first observation.
class Dataset {
 public:
  // Throws Error(kSchema) on an empty observation list, misaligned value
  // vectors, negative collection times, or non-increasing seq per browser.
  Dataset(AttributeCatalog catalog, std::vector<Observation> observations);

  const AttributeCatalog& catalog() const { return catalog_; }
  const std::vector<Observation>& observations() const {
    return observations_;
  }
  std::size_t size() const { return observations_.size(); }

  std::size_t num_users() const { return user_ids_.size(); }
  const std::vector<std::string>& user_ids() const { return user_ids_; }
  // Observation index of each user's stored fingerprint.
  const std::vector<std::size_t>& stored_observations() const {
    return stored_;
  }
  // Observation index pairs (earlier, later), per browser in seq order,
  // browsers in id order. Interleaved repeats are kept.
  const std::vector<std::pair<std::size_t, std::size_t>>&
  consecutive_observation_pairs() const {
    return pairs_;
  }

  Fingerprint FingerprintOf(std::size_t observation,
                            const AttributeSet& attributes) const;
  Fingerprint StoredFingerprint(std::size_t user) const {
    return FingerprintOf(stored_[user], catalog_.All());
  }

 private:
  AttributeCatalog catalog_;
  std::vector<Observation> observations_;
  std::vector<std::string> user_ids_;
  std::vector<std::size_t> stored_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

// Catalog file: JSON array of
// {"name", "kind", "async", "set_separator"?, "match_threshold"?}.
AttributeCatalog ParseCatalog(std::string_view json_text);
AttributeCatalog LoadCatalog(const std::filesystem::path& path);
std::string CatalogToJson(const AttributeCatalog& catalog);

// Dataset file: JSON Lines of
// {"browser_id", "seq", "values": {attr: str}, "collect_ms": {attr: float}}.
// Errors name the 1-based line number and the offending field.
Dataset ParseDataset(std::istream& jsonl, AttributeCatalog catalog);
Dataset LoadDataset(const std::filesystem::path& dataset_path,
                    const std::filesystem::path& catalog_path);
void WriteDataset(const Dataset& dataset, std::ostream& out);

// Restricts `fingerprint` (aligned with `from`) to `to`, keeping canonical
// order. Throws Error(kConfig) if `to` is not a subset of `from`.
Fingerprint Project(const Fingerprint& fingerprint, const AttributeSet& from,
                    const AttributeSet& to);

struct PmfEntry {
  Fingerprint values;
  double probability = 0.0;
};

// Probability mass function over fingerprints of a fixed attribute set.
// Entries are unique and sorted by fingerprint.
class Pmf {
 public:
  // Throws Error(kSchema) on duplicates, probabilities outside (0, 1], a
  // total that differs from 1 by more than 1e-9, or misaligned tuples.
  Pmf(AttributeSet attributes, std::vector<PmfEntry> entries);

  const AttributeSet& attributes() const { return attributes_; }
  const std::vector<PmfEntry>& entries() const { return entries_; }

  // Pushforward under Project(·, attributes(), to).
  Pmf Project(const AttributeSet& to) const;

 private:
  Pmf() = default;

  AttributeSet attributes_;
  std::vector<PmfEntry> entries_;
};

// Distribution of the users' stored fingerprints projected onto `attributes`.
Pmf ComputePmf(const Dataset& dataset, const AttributeSet& attributes);

// Shannon entropy in bits.
double Entropy(const Pmf& pmf);

// Consecutive same-browser fingerprint pairs over the whole catalog.
std::vector<std::pair<Fingerprint, Fingerprint>> ConsecutivePairs(
    const Dataset& dataset);

// Byte length of the UTF-8 value.
inline std::size_t ValueSize(std::string_view value) { return value.size(); }

}  // namespace fpselect

#endif  // FPSELECT_DATASET_H_
