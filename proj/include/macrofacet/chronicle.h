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

#ifndef MACROFACET_CHRONICLE_H_
#define MACROFACET_CHRONICLE_H_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "macrofacet/index_set.h"

namespace macrofacet {

using FacetIdSet = std::set<std::string>;

struct Facet {
  std::string id;
  std::string label;
  double cost = 1.0;
};

struct Edge {
  std::string source;
  std::string target;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// A user's facets plus the implication graph over them. An edge (u, v) means
// selecting u entails v. Facet order is insertion order and drives every
// downstream tie-break. Immutable once constructed.
class Chronicle {
 public:
  Chronicle() = default;

  // Throws ValidationError on empty/duplicate ids, negative or non-finite
  // costs, and dangling edge endpoints. Self-loops and repeated edges are
  // dropped. Zero costs are accepted and reported through warnings().
  Chronicle(std::vector<Facet> facets, std::vector<Edge> edges);

  const std::vector<Facet>& facets() const { return facets_; }
  // Deduplicated, self-loop free, first-seen order.
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return facets_.size(); }

  std::optional<std::size_t> find(std::string_view id) const;
  // Throws ValidationError(UNKNOWN_FACET) if absent.
  std::size_t index_of(std::string_view id) const;

  const std::vector<IndexSet>& successors() const { return successors_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::vector<Facet> facets_;
  std::vector<Edge> edges_;
  std::vector<IndexSet> successors_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> warnings_;
};

// Facets reachable from `seed` (paths of length zero included).
IndexSet Closure(const Chronicle& chronicle, const IndexSet& seed);
FacetIdSet Closure(const Chronicle& chronicle, const FacetIdSet& seed);

bool IsClosed(const Chronicle& chronicle, const FacetIdSet& s);

struct MacroFacet {
  std::string id;      // "scc:<lexicographically smallest member id>"
  IndexSet members;    // facet indices of one strongly connected component
  IndexSet closure;    // facet indices reachable from members
  double cost = 0.0;   // sum of facet costs over closure
};

// SCC condensation of a chronicle. Macro-facets are ordered by id. Carries
// its own copy of the facet ids and costs so it round-trips through JSON
// without the source chronicle.
class MacroFacetSet {
 public:
  MacroFacetSet() = default;

  // Validates: members partition the facets, members ⊆ closure, cost equals
  // the closure sum, edge endpoints valid. Throws ValidationError.
  MacroFacetSet(std::vector<Facet> facets, std::vector<MacroFacet> macro_facets,
                std::vector<std::pair<std::size_t, std::size_t>> edges);

  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<MacroFacet>& macro_facets() const { return macro_facets_; }
  std::size_t size() const { return macro_facets_.size(); }
  // Pairs of macro-facet indices, sorted.
  const std::vector<std::pair<std::size_t, std::size_t>>& condensation_edges()
      const {
    return edges_;
  }
  std::size_t macro_of(std::size_t facet) const { return facet_to_macro_[facet]; }

  std::vector<std::string> ids() const;
  std::optional<std::size_t> find(std::string_view macro_id) const;
  std::size_t index_of(std::string_view macro_id) const;
  std::optional<std::size_t> find_facet(std::string_view facet_id) const;

  IndexSet ToIndices(const std::set<std::string>& macro_ids) const;
  FacetIdSet FacetIds(const IndexSet& facets) const;

 private:
  std::vector<Facet> facets_;
  std::vector<MacroFacet> macro_facets_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::size_t> facet_to_macro_;
  std::unordered_map<std::string, std::size_t> macro_index_;
  std::unordered_map<std::string, std::size_t> facet_index_;
};

MacroFacetSet Compile(const Chronicle& chronicle);

// Union of the closures of the selected macro-facets (facet indices).
IndexSet Expand(const MacroFacetSet& mset, const IndexSet& selection);
FacetIdSet Expand(const MacroFacetSet& mset,
                  const std::set<std::string>& selection);

// Modular cost: sum of d(m) over the selection. Overlapping closures are
// counted once per macro-facet.
double SelectionCost(const MacroFacetSet& mset, const IndexSet& selection);
double SelectionCost(const MacroFacetSet& mset,
                     const std::set<std::string>& selection);

}  // namespace macrofacet

#endif  // MACROFACET_CHRONICLE_H_
