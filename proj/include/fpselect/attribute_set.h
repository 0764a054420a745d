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

#ifndef FPSELECT_ATTRIBUTE_SET_H_
#define FPSELECT_ATTRIBUTE_SET_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace fpselect {

// Position of an attribute in the canonical (name-sorted) catalog order.
using AttributeIndex = std::uint32_t;

// A subset of the candidate attributes, held as sorted unique indices.
//
// Ordering is lexicographic on the sorted index sequence, which is the
// canonical set order used for every deterministic tie-break.
class AttributeSet {
 public:
  AttributeSet() = default;
  AttributeSet(std::initializer_list<AttributeIndex> indices);
  explicit AttributeSet(std::vector<AttributeIndex> indices);

  // {0, 1, ..., n - 1}.
  static AttributeSet Full(std::size_t n);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }
  AttributeIndex operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<AttributeIndex>& indices() const { return indices_; }

  bool Contains(AttributeIndex index) const;
  bool IsSubsetOf(const AttributeSet& other) const;
  bool IsStrictSubsetOf(const AttributeSet& other) const {
    return size() < other.size() && IsSubsetOf(other);
  }

  // Copy of this set with `index` added.
  AttributeSet With(AttributeIndex index) const;

  // Position of each member of `subset` within this set. Requires
  // subset ⊆ *this.
  std::vector<std::size_t> PositionsOf(const AttributeSet& subset) const;

  // "{0,2,5}"; for diagnostics.
  std::string DebugString() const;

  friend bool operator==(const AttributeSet&, const AttributeSet&) = default;
  friend std::strong_ordering operator<=>(const AttributeSet& a,
                                          const AttributeSet& b) {
    return a.indices_ <=> b.indices_;
  }

 private:
  std::vector<AttributeIndex> indices_;
};

struct AttributeSetHash {
  std::size_t operator()(const AttributeSet& set) const;
};

}  // namespace fpselect

#endif  // FPSELECT_ATTRIBUTE_SET_H_
