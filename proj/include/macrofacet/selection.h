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

#ifndef MACROFACET_SELECTION_H_
#define MACROFACET_SELECTION_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "macrofacet/chronicle.h"
#include "macrofacet/index_set.h"
#include "macrofacet/matroid.h"
#include "macrofacet/utility.h"

namespace macrofacet {

enum class StopReason { kNoPositiveGain, kCandidatesExhausted };

std::string ToString(StopReason reason);

// One considered candidate: the argmax of the marginal gains over the
// remaining pool, and what the oracle said about it.
struct TraceStep {
  std::size_t candidate = 0;
  double gain = 0.0;
  bool accepted = false;
  std::optional<std::size_t> violated_node;  // leaf-most, when rejected
  std::vector<NodeCheck> checks;             // every node on the chain
  std::size_t remaining = 0;                 // pool size after removal
};

struct SelectionTrace {
  std::vector<TraceStep> iterations;
  StopReason stop_reason = StopReason::kCandidatesExhausted;
  // Set when stopping on a non-positive best gain.
  std::optional<std::size_t> stop_candidate;
  double stop_gain = 0.0;
};

struct SelectionResult {
  std::string algorithm;
  std::vector<std::size_t> chosen;  // selection order
  std::vector<std::string> chosen_ids;
  double value = 0.0;               // utility re-evaluated on `chosen`
  std::size_t evaluations = 0;      // marginal-gain or set evaluations made
  SelectionTrace trace;
  std::optional<FacetIdSet> expansion;
  std::optional<double> cost;
};

inline constexpr std::size_t kDefaultBruteForceCeiling = 20;

// Greedy under a matroid oracle: repeatedly take the candidate with the
// largest marginal gain (ties to the smallest index), stop once that gain is
// not positive, drop the candidate from the pool, and keep it only if the
// oracle accepts it. Throws ValidationError(GROUND_MISMATCH) if the utility
// ground differs from the tree universe.
SelectionResult GreedySelect(const UtilityFunction& utility,
                             const QuotaTree& tree);

// Same selections as GreedySelect for submodular utilities, with stale gains
// kept in a max-heap as upper bounds and recomputed only when they surface.
SelectionResult LazyGreedySelect(const UtilityFunction& utility,
                                 const QuotaTree& tree);

// Exact maximizer over all independent sets, enumerated depth-first through
// the oracle. Ties go to the lexicographically smallest sorted id list.
// Throws LimitError above `ceiling` elements.
SelectionResult BruteForceOptimal(const UtilityFunction& utility,
                                  const QuotaTree& tree,
                                  std::size_t ceiling = kDefaultBruteForceCeiling);

// greedy.value / optimal.value, or 1 when the optimum is 0. Throws
// InvariantError if greedy beats the optimum by more than `tolerance`.
double ApproximationRatio(const SelectionResult& greedy,
                          const SelectionResult& optimal,
                          double tolerance = kValueTolerance);

// Fills expansion and cost from the macro-facets the result was chosen over.
void AttachExpansion(SelectionResult& result, const MacroFacetSet& mset);

}  // namespace macrofacet

#endif  // MACROFACET_SELECTION_H_
