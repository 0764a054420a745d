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

#include "fpselect/attribute_set.h"

#include <algorithm>
#include <numeric>

#include "fpselect/error.h"

namespace fpselect {

AttributeSet::AttributeSet(std::initializer_list<AttributeIndex> indices)
    : AttributeSet(std::vector<AttributeIndex>(indices)) {}

AttributeSet::AttributeSet(std::vector<AttributeIndex> indices)
    : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()),
                 indices_.end());
}

AttributeSet AttributeSet::Full(std::size_t n) {
  std::vector<AttributeIndex> all(n);
  std::iota(all.begin(), all.end(), AttributeIndex{0});
  AttributeSet set;
  set.indices_ = std::move(all);
  return set;
}

bool AttributeSet::Contains(AttributeIndex index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool AttributeSet::IsSubsetOf(const AttributeSet& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(),
                       indices_.begin(), indices_.end());
}

AttributeSet AttributeSet::With(AttributeIndex index) const {
  AttributeSet out = *this;
  auto it = std::lower_bound(out.indices_.begin(), out.indices_.end(), index);
  if (it == out.indices_.end() || *it != index) out.indices_.insert(it, index);
  return out;
}

std::vector<std::size_t> AttributeSet::PositionsOf(
    const AttributeSet& subset) const {
  std::vector<std::size_t> positions;
  positions.reserve(subset.size());
  std::size_t j = 0;
  for (AttributeIndex index : subset) {
    while (j < indices_.size() && indices_[j] < index) ++j;
    if (j == indices_.size() || indices_[j] != index) {
      throw Error(ErrorCode::kConfig, "attribute set " + subset.DebugString() +
                                          " is not a subset of " +
                                          DebugString());
    }
    positions.push_back(j);
  }
  return positions;
}

std::string AttributeSet::DebugString() const {
  std::string out = "{";
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(indices_[i]);
  }
  return out + "}";
}

std::size_t AttributeSetHash::operator()(const AttributeSet& set) const {
  // FNV-1a over the indices.
  std::uint64_t h = 1469598103934665603ULL;
  for (AttributeIndex index : set) {
    h ^= index + 0x9e3779b9U;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace fpselect
