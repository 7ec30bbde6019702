// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MACROFACET_INDEX_SET_H_
#define MACROFACET_INDEX_SET_H_

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <vector>

namespace macrofacet {

// Sorted, duplicate-free list of element indices into some ordered ground set.
using IndexSet = std::vector<std::size_t>;

inline IndexSet Normalize(IndexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool Contains(const IndexSet& s, std::size_t x) {
  return std::binary_search(s.begin(), s.end(), x);
}

inline IndexSet Union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

inline IndexSet Intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

inline IndexSet Difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

inline bool IsSubset(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline IndexSet WithElement(const IndexSet& s, std::size_t x) {
  IndexSet out = s;
  auto it = std::lower_bound(out.begin(), out.end(), x);
  if (it == out.end() || *it != x) out.insert(it, x);
  return out;
}

// Bitmask <-> set conversion for exhaustive enumeration over small grounds.
inline IndexSet FromMask(unsigned long long mask) {
  IndexSet out;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1ULL) out.push_back(i);
  }
  return out;
}

inline unsigned long long ToMask(const IndexSet& s) {
  unsigned long long mask = 0;
  for (std::size_t i : s) mask |= 1ULL << i;
  return mask;
}

}  // namespace macrofacet

#endif  // MACROFACET_INDEX_SET_H_
