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

#include "macrofacet/chronicle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "macrofacet/error.h"

namespace macrofacet {

Chronicle::Chronicle(std::vector<Facet> facets, std::vector<Edge> edges)
    : facets_(std::move(facets)) {
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    const Facet& f = facets_[i];
    if (f.id.empty()) {
      throw ValidationError("EMPTY_FACET_ID",
                            "facet at position " + std::to_string(i) +
                                " has an empty id",
                            {std::to_string(i)});
    }
    if (!index_.emplace(f.id, i).second) {
      throw ValidationError("DUPLICATE_FACET_ID",
                            "duplicate facet id '" + f.id + "'", {f.id});
    }
    if (!std::isfinite(f.cost) || f.cost < 0.0) {
      throw ValidationError("INVALID_COST",
                            "facet '" + f.id + "' has a negative or "
                            "non-finite cost", {f.id});
    }
    if (f.cost == 0.0) {
      warnings_.push_back("facet '" + f.id + "' has zero cost");
    }
  }

  successors_.resize(facets_.size());
  for (const Edge& e : edges) {
    auto src = find(e.source);
    if (!src) {
      throw ValidationError("UNKNOWN_FACET",
                            "edge source '" + e.source + "' is not a facet",
                            {e.source});
    }
    auto dst = find(e.target);
    if (!dst) {
      throw ValidationError("UNKNOWN_FACET",
                            "edge target '" + e.target + "' is not a facet",
                            {e.target});
    }
    if (*src == *dst) continue;
    IndexSet& succ = successors_[*src];
    auto it = std::lower_bound(succ.begin(), succ.end(), *dst);
    if (it != succ.end() && *it == *dst) continue;
    succ.insert(it, *dst);
    edges_.push_back(e);
  }
}

std::optional<std::size_t> Chronicle::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Chronicle::index_of(std::string_view id) const {
  auto i = find(id);
  if (!i) {
    throw ValidationError("UNKNOWN_FACET",
                          "unknown facet id '" + std::string(id) + "'",
                          {std::string(id)});
  }
  return *i;
}

IndexSet Closure(const Chronicle& chronicle, const IndexSet& seed) {
  std::vector<char> seen(chronicle.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t s : seed) {
    if (s >= chronicle.size()) {
      throw ValidationError("UNKNOWN_FACET",
                            "facet index " + std::to_string(s) +
                                " out of range",
                            {std::to_string(s)});
    }
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : chronicle.successors()[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  IndexSet out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

FacetIdSet Closure(const Chronicle& chronicle, const FacetIdSet& seed) {
  IndexSet idx;
  for (const auto& id : seed) idx.push_back(chronicle.index_of(id));
  FacetIdSet out;
  for (std::size_t i : Closure(chronicle, Normalize(std::move(idx)))) {
    out.insert(chronicle.facets()[i].id);
  }
  return out;
}

bool IsClosed(const Chronicle& chronicle, const FacetIdSet& s) {
  return Closure(chronicle, s) == s;
}

namespace {

// Iterative Tarjan. Returns the component number of each vertex.
std::vector<std::size_t> StronglyConnectedComponents(
    const std::vector<IndexSet>& succ, std::size_t* num_components) {
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  const std::size_t n = succ.size();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (vertex, next edge)
  std::size_t counter = 0;
  std::size_t components = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < succ[v].size()) {
        std::size_t w = succ[v][next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      std::size_t done = v;
      call.pop_back();
      if (!call.empty()) {
        std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = components;
        } while (w != done);
        ++components;
      }
    }
  }
  *num_components = components;
  return comp;
}

}  // namespace

MacroFacetSet Compile(const Chronicle& chronicle) {
  const auto& facets = chronicle.facets();
  std::size_t num_components = 0;
  std::vector<std::size_t> comp =
      StronglyConnectedComponents(chronicle.successors(), &num_components);

  std::vector<IndexSet> groups(num_components);
  for (std::size_t i = 0; i < facets.size(); ++i) groups[comp[i]].push_back(i);

  // Order components by their smallest member id.
  std::vector<std::pair<std::string, std::size_t>> keyed;
  for (std::size_t c = 0; c < num_components; ++c) {
    std::string min_id = facets[groups[c].front()].id;
    for (std::size_t i : groups[c]) min_id = std::min(min_id, facets[i].id);
    keyed.emplace_back("scc:" + min_id, c);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> rank(num_components);
  for (std::size_t r = 0; r < keyed.size(); ++r) rank[keyed[r].second] = r;

  std::vector<MacroFacet> macros;
  macros.reserve(num_components);
  for (const auto& [id, c] : keyed) {
    MacroFacet m;
    m.id = id;
    m.members = groups[c];
    m.closure = Closure(chronicle, m.members);
    for (std::size_t f : m.closure) m.cost += facets[f].cost;
    macros.push_back(std::move(m));
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < facets.size(); ++u) {
    for (std::size_t v : chronicle.successors()[u]) {
      if (comp[u] != comp[v]) edges.emplace_back(rank[comp[u]], rank[comp[v]]);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  return MacroFacetSet(facets, std::move(macros), std::move(edges));
}

MacroFacetSet::MacroFacetSet(
    std::vector<Facet> facets, std::vector<MacroFacet> macro_facets,
    std::vector<std::pair<std::size_t, std::size_t>> edges)
    : facets_(std::move(facets)),
      macro_facets_(std::move(macro_facets)),
      edges_(std::move(edges)) {
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    if (!facet_index_.emplace(facets_[i].id, i).second) {
      throw ValidationError("DUPLICATE_FACET_ID",
                            "duplicate facet id '" + facets_[i].id + "'",
                            {facets_[i].id});
    }
  }
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  facet_to_macro_.assign(facets_.size(), kNone);
  for (std::size_t m = 0; m < macro_facets_.size(); ++m) {
    MacroFacet& mf = macro_facets_[m];
    if (!macro_index_.emplace(mf.id, m).second) {
      throw ValidationError("DUPLICATE_MACRO_ID",
                            "duplicate macro-facet id '" + mf.id + "'",
                            {mf.id});
    }
    mf.members = Normalize(std::move(mf.members));
    mf.closure = Normalize(std::move(mf.closure));
    if (mf.members.empty()) {
      throw ValidationError("EMPTY_MACRO_FACET",
                            "macro-facet '" + mf.id + "' has no members",
                            {mf.id});
    }
    for (std::size_t f : mf.closure) {
      if (f >= facets_.size()) {
        throw ValidationError("UNKNOWN_FACET",
                              "macro-facet '" + mf.id +
                                  "' references an unknown facet",
                              {mf.id});
      }
    }
    if (!IsSubset(mf.members, mf.closure)) {
      throw ValidationError("MEMBERS_NOT_IN_CLOSURE",
                            "macro-facet '" + mf.id +
                                "' has members outside its closure",
                            {mf.id});
    }
    for (std::size_t f : mf.members) {
      if (facet_to_macro_[f] != kNone) {
        throw ValidationError("OVERLAPPING_MACRO_FACETS",
                              "facet '" + facets_[f].id +
                                  "' belongs to two macro-facets",
                              {facets_[f].id});
      }
      facet_to_macro_[f] = m;
    }
    double cost = 0.0;
    for (std::size_t f : mf.closure) cost += facets_[f].cost;
    if (cost != mf.cost) {
      throw ValidationError("COST_MISMATCH",
                            "macro-facet '" + mf.id +
                                "' cost differs from its closure sum",
                            {mf.id});
    }
  }
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    if (facet_to_macro_[f] == kNone) {
      throw ValidationError("UNASSIGNED_FACET",
                            "facet '" + facets_[f].id +
                                "' belongs to no macro-facet",
                            {facets_[f].id});
    }
  }
  for (const auto& [u, v] : edges_) {
    if (u >= macro_facets_.size() || v >= macro_facets_.size() || u == v) {
      throw ValidationError("INVALID_CONDENSATION_EDGE",
                            "condensation edge has invalid endpoints");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

std::vector<std::string> MacroFacetSet::ids() const {
  std::vector<std::string> out;
  out.reserve(macro_facets_.size());
  for (const auto& m : macro_facets_) out.push_back(m.id);
  return out;
}

std::optional<std::size_t> MacroFacetSet::find(std::string_view macro_id) const {
  auto it = macro_index_.find(std::string(macro_id));
  if (it == macro_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t MacroFacetSet::index_of(std::string_view macro_id) const {
  auto i = find(macro_id);
  if (!i) {
    throw ValidationError("UNKNOWN_MACRO_FACET",
                          "unknown macro-facet id '" + std::string(macro_id) +
                              "'",
                          {std::string(macro_id)});
  }
  return *i;
}

std::optional<std::size_t> MacroFacetSet::find_facet(
    std::string_view facet_id) const {
  auto it = facet_index_.find(std::string(facet_id));
  if (it == facet_index_.end()) return std::nullopt;
  return it->second;
}

IndexSet MacroFacetSet::ToIndices(const std::set<std::string>& macro_ids) const {
  IndexSet out;
  for (const auto& id : macro_ids) out.push_back(index_of(id));
  return Normalize(std::move(out));
}

FacetIdSet MacroFacetSet::FacetIds(const IndexSet& facets) const {
  FacetIdSet out;
  for (std::size_t f : facets) out.insert(facets_.at(f).id);
  return out;
}

IndexSet Expand(const MacroFacetSet& mset, const IndexSet& selection) {
  std::vector<char> in(mset.facets().size(), 0);
  for (std::size_t m : selection) {
    if (m >= mset.size()) {
      throw ValidationError("UNKNOWN_MACRO_FACET",
                            "macro-facet index " + std::to_string(m) +
                                " out of range",
                            {std::to_string(m)});
    }
    for (std::size_t f : mset.macro_facets()[m].closure) in[f] = 1;
  }
  IndexSet out;
  for (std::size_t f = 0; f < in.size(); ++f) {
    if (in[f]) out.push_back(f);
  }
  return out;
}

FacetIdSet Expand(const MacroFacetSet& mset,
                  const std::set<std::string>& selection) {
  return mset.FacetIds(Expand(mset, mset.ToIndices(selection)));
}

double SelectionCost(const MacroFacetSet& mset, const IndexSet& selection) {
  double total = 0.0;
  for (std::size_t m : selection) {
    if (m >= mset.size()) {
      throw ValidationError("UNKNOWN_MACRO_FACET",
                            "macro-facet index " + std::to_string(m) +
                                " out of range",
                            {std::to_string(m)});
    }
    total += mset.macro_facets()[m].cost;
  }
  return total;
}

double SelectionCost(const MacroFacetSet& mset,
                     const std::set<std::string>& selection) {
  return SelectionCost(mset, mset.ToIndices(selection));
}

}  // namespace macrofacet
