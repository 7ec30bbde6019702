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

#ifndef MACROFACET_MATROID_H_
#define MACROFACET_MATROID_H_

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "macrofacet/index_set.h"

namespace macrofacet {

inline constexpr std::size_t kUnboundedQuota =
    std::numeric_limits<std::size_t>::max();

// One input quota constraint, |S ∩ members| <= quota.
struct QuotaConstraint {
  std::string name;  // optional; defaults to "A<k>" by input position
  std::vector<std::string> members;
  std::size_t quota = 0;
};

struct QuotaNode {
  std::string name;
  IndexSet members;
  std::size_t quota = kUnboundedQuota;
  std::optional<std::size_t> parent;  // empty only for the super-root
  std::vector<std::size_t> children;
  std::size_t depth = 0;  // super-root is depth 0
};

// A validated laminar family stored as a rooted tree under a synthetic
// super-root (node 0, all elements, unbounded quota). Immutable.
class QuotaTree {
 public:
  static constexpr std::size_t kRoot = 0;

  const std::vector<std::string>& universe() const { return universe_; }
  std::size_t universe_size() const { return universe_.size(); }
  const std::vector<QuotaNode>& nodes() const { return nodes_; }
  const QuotaNode& node(std::size_t i) const { return nodes_.at(i); }

  // Nodes containing `element`, leaf-most first, ending at the super-root.
  std::span<const std::size_t> chain(std::size_t element) const {
    return chains_.at(element);
  }
  // Number of nodes on the longest root-to-leaf path, super-root included.
  std::size_t height() const { return height_; }

  std::optional<std::size_t> find(std::string_view id) const;
  std::size_t index_of(std::string_view id) const;
  std::optional<std::size_t> find_node(std::string_view name) const;

 private:
  friend QuotaTree BuildQuotaTree(std::vector<std::string>,
                                  std::vector<QuotaConstraint>);

  std::vector<std::string> universe_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<QuotaNode> nodes_;
  std::vector<std::vector<std::size_t>> chains_;
  std::size_t height_ = 1;
};

// Validates laminarity and builds the tree. Duplicate member sets are merged
// keeping the smallest quota. Throws ValidationError with code
// LAMINARITY_VIOLATION (witness: the two offending constraint names) or
// UNKNOWN_MACRO_FACET.
QuotaTree BuildQuotaTree(std::vector<std::string> universe,
                         std::vector<QuotaConstraint> constraints);

// Disjoint groups, optionally under an overall budget node spanning the
// universe. Overlapping groups are rejected with LAMINARITY_VIOLATION.
QuotaTree PartitionMatroid(std::vector<std::string> universe,
                           std::vector<QuotaConstraint> groups,
                           std::optional<std::size_t> overall_budget);

// Stateless check: every node quota respected.
bool IsIndependent(const QuotaTree& tree, const IndexSet& s);

struct Feasibility {
  bool accepted = true;
  std::optional<std::size_t> violated_node;  // leaf-most violated node
};

struct NodeCheck {
  std::size_t node = 0;
  std::size_t count_after = 0;  // cnt[A] + 1
  std::size_t quota = 0;
  bool ok = true;
};

// Counter-tree independence oracle. Single writer; counters always equal
// |chosen ∩ members(A)| and never exceed quotas.
class OracleState {
 public:
  explicit OracleState(const QuotaTree& tree);

  // O(height) counter reads; does not mutate the chosen set.
  Feasibility CanAdd(std::size_t element) const;
  // Per-node checks along the chain, for audit trails.
  std::vector<NodeCheck> Explain(std::size_t element) const;

  // Throws ValidationError if infeasible, duplicate, or absent.
  void Add(std::size_t element);
  void Remove(std::size_t element);

  bool contains(std::size_t element) const { return chosen_.at(element); }
  IndexSet chosen() const;
  std::size_t size() const { return num_chosen_; }
  std::size_t counter(std::size_t node) const { return counters_.at(node); }
  const std::vector<std::size_t>& counters() const { return counters_; }
  const QuotaTree& tree() const { return *tree_; }

  // Instrumentation: counter reads made by the most recent CanAdd and in
  // total since construction.
  std::size_t last_query_reads() const { return last_query_reads_; }
  std::size_t total_reads() const { return total_reads_; }

 private:
  void CheckElement(std::size_t element) const;

  const QuotaTree* tree_;
  std::vector<std::size_t> counters_;
  std::vector<char> chosen_;
  std::size_t num_chosen_ = 0;
  mutable std::size_t last_query_reads_ = 0;
  mutable std::size_t total_reads_ = 0;
};

using IndependencePredicate = std::function<bool(const IndexSet&)>;

struct AxiomVerdict {
  bool pass = true;
  // "empty_set", "downward_closure", "augmentation" or "consistency".
  std::string failed_axiom;
  IndexSet a;
  IndexSet b;
  std::optional<std::size_t> x;
};

inline constexpr std::size_t kDefaultAxiomLimit = 10;

// Exhaustive check of the matroid axioms for the independence family the
// counter oracle induces (each set built by sequential CanAdd/Add), plus
// agreement with the stateless IsIndependent. Throws LimitError above
// `limit` elements.
AxiomVerdict VerifyMatroidAxioms(const QuotaTree& tree,
                                 std::size_t limit = kDefaultAxiomLimit);

// Same checks against an arbitrary predicate, e.g. a deliberately broken
// oracle.
AxiomVerdict VerifyMatroidAxioms(const QuotaTree& tree,
                                 const IndependencePredicate& independent,
                                 std::size_t limit = kDefaultAxiomLimit);

}  // namespace macrofacet

#endif  // MACROFACET_MATROID_H_
