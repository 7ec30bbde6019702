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

#include "macrofacet/matroid.h"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

#include "macrofacet/error.h"

namespace macrofacet {

std::optional<std::size_t> QuotaTree::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t QuotaTree::index_of(std::string_view id) const {
  auto i = find(id);
  if (!i) {
    throw ValidationError("UNKNOWN_MACRO_FACET",
                          "unknown macro-facet id '" + std::string(id) + "'",
                          {std::string(id)});
  }
  return *i;
}

std::optional<std::size_t> QuotaTree::find_node(std::string_view name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return i;
  }
  return std::nullopt;
}

QuotaTree BuildQuotaTree(std::vector<std::string> universe,
                         std::vector<QuotaConstraint> constraints) {
  QuotaTree tree;
  tree.universe_ = std::move(universe);
  for (std::size_t i = 0; i < tree.universe_.size(); ++i) {
    if (!tree.index_.emplace(tree.universe_[i], i).second) {
      throw ValidationError("DUPLICATE_MACRO_ID",
                            "duplicate element '" + tree.universe_[i] +
                                "' in universe",
                            {tree.universe_[i]});
    }
  }

  struct Pending {
    std::string name;
    IndexSet members;
    std::size_t quota;
  };
  std::vector<Pending> pending;
  std::map<IndexSet, std::size_t> by_members;
  std::set<std::string> names{"root"};
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    QuotaConstraint& c = constraints[k];
    std::string name = c.name.empty() ? "A" + std::to_string(k + 1) : c.name;
    if (!names.insert(name).second) {
      throw ValidationError("DUPLICATE_CONSTRAINT_NAME",
                            "constraint name '" + name + "' is used twice",
                            {name});
    }
    IndexSet members;
    for (const auto& id : c.members) {
      auto i = tree.find(id);
      if (!i) {
        throw ValidationError("UNKNOWN_MACRO_FACET",
                              "constraint '" + name +
                                  "' references unknown element '" + id + "'",
                              {name, id});
      }
      members.push_back(*i);
    }
    members = Normalize(std::move(members));
    auto [it, fresh] = by_members.emplace(members, pending.size());
    if (!fresh) {
      Pending& existing = pending[it->second];
      existing.quota = std::min(existing.quota, c.quota);
      continue;
    }
    pending.push_back({std::move(name), std::move(members), c.quota});
  }

  for (std::size_t i = 0; i < pending.size(); ++i) {
    for (std::size_t j = i + 1; j < pending.size(); ++j) {
      const IndexSet& a = pending[i].members;
      const IndexSet& b = pending[j].members;
      if (!Intersection(a, b).empty() && !IsSubset(a, b) && !IsSubset(b, a)) {
        throw ValidationError(
            "LAMINARITY_VIOLATION",
            "constraints '" + pending[i].name + "' and '" + pending[j].name +
                "' overlap without nesting",
            {pending[i].name, pending[j].name});
      }
    }
  }

  // Parents precede children once sorted by decreasing size.
  std::vector<std::size_t> order(pending.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pending[a].members.size() > pending[b].members.size();
  });

  QuotaNode root;
  root.name = "root";
  root.members.resize(tree.universe_.size());
  std::iota(root.members.begin(), root.members.end(), 0);
  tree.nodes_.push_back(std::move(root));

  for (std::size_t p : order) {
    QuotaNode node;
    node.name = pending[p].name;
    node.members = pending[p].members;
    node.quota = pending[p].quota;
    std::size_t parent = QuotaTree::kRoot;
    if (!node.members.empty()) {
      std::size_t best_size = kUnboundedQuota;
      for (std::size_t q = 1; q < tree.nodes_.size(); ++q) {
        const QuotaNode& cand = tree.nodes_[q];
        if (cand.members.size() < best_size && IsSubset(node.members, cand.members)) {
          parent = q;
          best_size = cand.members.size();
        }
      }
    }
    node.parent = parent;
    node.depth = tree.nodes_[parent].depth + 1;
    std::size_t self = tree.nodes_.size();
    tree.nodes_[parent].children.push_back(self);
    tree.nodes_.push_back(std::move(node));
  }

  std::vector<std::size_t> leaf(tree.universe_.size(), QuotaTree::kRoot);
  for (std::size_t q = 1; q < tree.nodes_.size(); ++q) {
    for (std::size_t e : tree.nodes_[q].members) {
      if (tree.nodes_[q].depth > tree.nodes_[leaf[e]].depth) leaf[e] = q;
    }
  }
  tree.chains_.resize(tree.universe_.size());
  for (std::size_t e = 0; e < tree.universe_.size(); ++e) {
    std::optional<std::size_t> cur = leaf[e];
    while (cur) {
      tree.chains_[e].push_back(*cur);
      cur = tree.nodes_[*cur].parent;
    }
  }
  tree.height_ = 1;
  for (const auto& n : tree.nodes_) tree.height_ = std::max(tree.height_, n.depth + 1);
  return tree;
}

QuotaTree PartitionMatroid(std::vector<std::string> universe,
                           std::vector<QuotaConstraint> groups,
                           std::optional<std::size_t> overall_budget) {
  std::map<std::string, std::string> owner;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].name.empty()) groups[g].name = "G" + std::to_string(g + 1);
    for (const auto& id : groups[g].members) {
      auto [it, fresh] = owner.emplace(id, groups[g].name);
      if (!fresh && it->second != groups[g].name) {
        throw ValidationError("LAMINARITY_VIOLATION",
                              "groups '" + it->second + "' and '" +
                                  groups[g].name + "' share element '" + id +
                                  "'",
                              {it->second, groups[g].name});
      }
    }
  }
  std::vector<QuotaConstraint> constraints = std::move(groups);
  if (overall_budget) {
    constraints.push_back({"budget", universe, *overall_budget});
  }
  return BuildQuotaTree(std::move(universe), std::move(constraints));
}

bool IsIndependent(const QuotaTree& tree, const IndexSet& s) {
  for (std::size_t e : s) {
    if (e >= tree.universe_size()) {
      throw ValidationError("UNKNOWN_MACRO_FACET",
                            "element index " + std::to_string(e) +
                                " out of range",
                            {std::to_string(e)});
    }
  }
  for (const QuotaNode& node : tree.nodes()) {
    if (node.quota == kUnboundedQuota) continue;
    if (Intersection(s, node.members).size() > node.quota) return false;
  }
  return true;
}

OracleState::OracleState(const QuotaTree& tree)
    : tree_(&tree),
      counters_(tree.nodes().size(), 0),
      chosen_(tree.universe_size(), 0) {}

void OracleState::CheckElement(std::size_t element) const {
  if (element >= chosen_.size()) {
    throw ValidationError("UNKNOWN_MACRO_FACET",
                          "element index " + std::to_string(element) +
                              " out of range",
                          {std::to_string(element)});
  }
}

Feasibility OracleState::CanAdd(std::size_t element) const {
  CheckElement(element);
  if (chosen_[element]) {
    throw ValidationError("DUPLICATE_ELEMENT",
                          "'" + tree_->universe()[element] +
                              "' is already chosen",
                          {tree_->universe()[element]});
  }
  last_query_reads_ = 0;
  for (std::size_t node : tree_->chain(element)) {
    const std::size_t quota = tree_->node(node).quota;
    if (quota == kUnboundedQuota) continue;
    ++last_query_reads_;
    if (counters_[node] >= quota) {
      total_reads_ += last_query_reads_;
      return {false, node};
    }
  }
  total_reads_ += last_query_reads_;
  return {true, std::nullopt};
}

std::vector<NodeCheck> OracleState::Explain(std::size_t element) const {
  CheckElement(element);
  std::vector<NodeCheck> checks;
  for (std::size_t node : tree_->chain(element)) {
    const std::size_t quota = tree_->node(node).quota;
    checks.push_back({node, counters_[node] + 1, quota,
                      quota == kUnboundedQuota || counters_[node] < quota});
  }
  return checks;
}

void OracleState::Add(std::size_t element) {
  Feasibility f = CanAdd(element);
  if (!f.accepted) {
    const std::string& name = tree_->node(*f.violated_node).name;
    throw ValidationError("INFEASIBLE_ADD",
                          "adding '" + tree_->universe()[element] +
                              "' violates quota of '" + name + "'",
                          {tree_->universe()[element], name});
  }
  for (std::size_t node : tree_->chain(element)) ++counters_[node];
  chosen_[element] = 1;
  ++num_chosen_;
}

void OracleState::Remove(std::size_t element) {
  CheckElement(element);
  if (!chosen_[element]) {
    throw ValidationError("ABSENT_ELEMENT",
                          "'" + tree_->universe()[element] +
                              "' is not chosen",
                          {tree_->universe()[element]});
  }
  for (std::size_t node : tree_->chain(element)) --counters_[node];
  chosen_[element] = 0;
  --num_chosen_;
}

IndexSet OracleState::chosen() const {
  IndexSet out;
  for (std::size_t e = 0; e < chosen_.size(); ++e) {
    if (chosen_[e]) out.push_back(e);
  }
  return out;
}

AxiomVerdict VerifyMatroidAxioms(const QuotaTree& tree, std::size_t limit) {
  return VerifyMatroidAxioms(
      tree,
      [&tree](const IndexSet& s) {
        OracleState state(tree);
        for (std::size_t e : s) {
          if (!state.CanAdd(e).accepted) return false;
          state.Add(e);
        }
        return true;
      },
      limit);
}

AxiomVerdict VerifyMatroidAxioms(const QuotaTree& tree,
                                 const IndependencePredicate& independent,
                                 std::size_t limit) {
  const std::size_t n = tree.universe_size();
  if (n > limit || n > 20) {
    throw LimitError("UNIVERSE_TOO_LARGE",
                     "exhaustive matroid check limited to " +
                         std::to_string(std::min<std::size_t>(limit, 20)) +
                         " elements, got " + std::to_string(n),
                     {std::to_string(n)});
  }
  using Mask = unsigned long long;
  const Mask full = 1ULL << n;
  std::vector<char> indep(full);
  for (Mask m = 0; m < full; ++m) indep[m] = independent(FromMask(m)) ? 1 : 0;

  AxiomVerdict v;
  if (!indep[0]) {
    v.pass = false;
    v.failed_axiom = "empty_set";
    return v;
  }
  for (Mask m = 0; m < full; ++m) {
    if (!indep[m]) continue;
    for (std::size_t e = 0; e < n; ++e) {
      Mask bit = 1ULL << e;
      if ((m & bit) && !indep[m ^ bit]) {
        v.pass = false;
        v.failed_axiom = "downward_closure";
        v.a = FromMask(m);
        v.b = FromMask(m ^ bit);
        v.x = e;
        return v;
      }
    }
  }
  std::vector<Mask> independent_sets;
  for (Mask m = 0; m < full; ++m) {
    if (indep[m]) independent_sets.push_back(m);
  }
  for (Mask a : independent_sets) {
    const int size_a = std::popcount(a);
    for (Mask b : independent_sets) {
      if (std::popcount(b) <= size_a) continue;
      bool augmentable = false;
      for (Mask rest = b & ~a; rest != 0; rest &= rest - 1) {
        if (indep[a | (rest & -rest)]) {
          augmentable = true;
          break;
        }
      }
      if (!augmentable) {
        v.pass = false;
        v.failed_axiom = "augmentation";
        v.a = FromMask(a);
        v.b = FromMask(b);
        return v;
      }
    }
  }
  for (Mask m = 0; m < full; ++m) {
    IndexSet s = FromMask(m);
    if (static_cast<bool>(indep[m]) != IsIndependent(tree, s)) {
      v.pass = false;
      v.failed_axiom = "consistency";
      v.a = std::move(s);
      return v;
    }
  }
  return v;
}

}  // namespace macrofacet
