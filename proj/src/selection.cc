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

#include "macrofacet/selection.h"

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>

#include "macrofacet/error.h"

namespace macrofacet {

std::string ToString(StopReason reason) {
  switch (reason) {
    case StopReason::kNoPositiveGain:
      return "no-positive-gain";
    case StopReason::kCandidatesExhausted:
      return "candidates-exhausted";
  }
  return "unknown";
}

namespace {

void CheckGround(const UtilityFunction& utility, const QuotaTree& tree) {
  if (utility.ground() != tree.universe()) {
    throw ValidationError("GROUND_MISMATCH",
                          "utility ground and constraint universe differ");
  }
}

// Shared tail of both greedy variants: oracle check, bookkeeping, trace.
void Consider(std::size_t candidate, double gain, std::size_t remaining,
              OracleState& state, IndexSet& current, SelectionResult& result) {
  TraceStep step;
  step.candidate = candidate;
  step.gain = gain;
  step.remaining = remaining;
  step.checks = state.Explain(candidate);
  Feasibility f = state.CanAdd(candidate);
  step.accepted = f.accepted;
  step.violated_node = f.violated_node;
  if (f.accepted) {
    state.Add(candidate);
    current = WithElement(current, candidate);
    result.chosen.push_back(candidate);
  }
  result.trace.iterations.push_back(std::move(step));
}

void Finish(const UtilityFunction& utility, SelectionResult& result) {
  for (std::size_t e : result.chosen) {
    result.chosen_ids.push_back(utility.ground()[e]);
  }
  result.value = utility.evaluate(Normalize(result.chosen));
}

}  // namespace

SelectionResult GreedySelect(const UtilityFunction& utility,
                             const QuotaTree& tree) {
  CheckGround(utility, tree);
  SelectionResult result;
  result.algorithm = "greedy";
  OracleState state(tree);
  IndexSet current;
  std::vector<std::size_t> pool(tree.universe_size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;

  while (!pool.empty()) {
    std::size_t best_pos = 0;
    double best_gain = 0.0;
    for (std::size_t pos = 0; pos < pool.size(); ++pos) {
      const double gain = utility.marginal_gain(current, pool[pos]);
      ++result.evaluations;
      // Pool stays sorted, so strict > keeps the smallest index on ties.
      if (pos == 0 || gain > best_gain) {
        best_pos = pos;
        best_gain = gain;
      }
    }
    const std::size_t best = pool[best_pos];
    if (best_gain <= 0.0) {
      result.trace.stop_reason = StopReason::kNoPositiveGain;
      result.trace.stop_candidate = best;
      result.trace.stop_gain = best_gain;
      Finish(utility, result);
      return result;
    }
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_pos));
    Consider(best, best_gain, pool.size(), state, current, result);
  }
  result.trace.stop_reason = StopReason::kCandidatesExhausted;
  Finish(utility, result);
  return result;
}

SelectionResult LazyGreedySelect(const UtilityFunction& utility,
                                 const QuotaTree& tree) {
  CheckGround(utility, tree);
  SelectionResult result;
  result.algorithm = "lazy";
  OracleState state(tree);
  IndexSet current;

  struct Entry {
    double bound;
    std::size_t element;
    std::size_t version;  // number of accepted elements when evaluated
  };
  // Largest bound first; among equal bounds, smallest element first.
  auto lower = [](const Entry& a, const Entry& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.element > b.element;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> heap(lower);
  for (std::size_t e = 0; e < tree.universe_size(); ++e) {
    heap.push({utility.marginal_gain(current, e), e, 0});
    ++result.evaluations;
  }

  while (!heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.version != result.chosen.size()) {
      heap.push({utility.marginal_gain(current, top.element), top.element,
                 result.chosen.size()});
      ++result.evaluations;
      continue;
    }
    if (top.bound <= 0.0) {
      result.trace.stop_reason = StopReason::kNoPositiveGain;
      result.trace.stop_candidate = top.element;
      result.trace.stop_gain = top.bound;
      Finish(utility, result);
      return result;
    }
    Consider(top.element, top.bound, heap.size(), state, current, result);
  }
  result.trace.stop_reason = StopReason::kCandidatesExhausted;
  Finish(utility, result);
  return result;
}

SelectionResult BruteForceOptimal(const UtilityFunction& utility,
                                  const QuotaTree& tree, std::size_t ceiling) {
  CheckGround(utility, tree);
  const std::size_t n = tree.universe_size();
  if (n > ceiling) {
    throw LimitError("UNIVERSE_TOO_LARGE",
                     "brute force limited to " + std::to_string(ceiling) +
                         " elements, got " + std::to_string(n),
                     {std::to_string(n)});
  }
  SelectionResult result;
  result.algorithm = "optimal";
  const auto& ids = utility.ground();

  OracleState state(tree);
  IndexSet current;
  IndexSet best;
  double best_value = utility.evaluate(current);
  result.evaluations = 1;

  auto sorted_ids = [&](const IndexSet& s) {
    std::vector<std::string> out;
    for (std::size_t e : s) out.push_back(ids[e]);
    std::sort(out.begin(), out.end());
    return out;
  };

  // Each independent set is reached exactly once: elements are appended in
  // increasing index order, and only through independent prefixes.
  auto visit = [&](auto&& self, std::size_t from) -> void {
    for (std::size_t e = from; e < n; ++e) {
      if (!state.CanAdd(e).accepted) continue;
      state.Add(e);
      current.push_back(e);
      const double value = utility.evaluate(current);
      ++result.evaluations;
      if (value > best_value ||
          (value == best_value && sorted_ids(current) < sorted_ids(best))) {
        best_value = value;
        best = current;
      }
      self(self, e + 1);
      current.pop_back();
      state.Remove(e);
    }
  };
  visit(visit, 0);

  result.chosen = best;
  result.trace.stop_reason = StopReason::kCandidatesExhausted;
  Finish(utility, result);
  return result;
}

double ApproximationRatio(const SelectionResult& greedy,
                          const SelectionResult& optimal, double tolerance) {
  if (greedy.value > optimal.value + tolerance) {
    throw InvariantError("OPTIMALITY_VIOLATED",
                         "greedy value " + std::to_string(greedy.value) +
                             " exceeds the brute-force optimum " +
                             std::to_string(optimal.value));
  }
  if (greedy.value < 0.0) {
    throw InvariantError("NEGATIVE_VALUE", "greedy value is negative");
  }
  if (optimal.value <= 0.0) return 1.0;
  return greedy.value / optimal.value;
}

void AttachExpansion(SelectionResult& result, const MacroFacetSet& mset) {
  IndexSet chosen = Normalize(result.chosen);
  result.expansion = mset.FacetIds(Expand(mset, chosen));
  result.cost = SelectionCost(mset, chosen);
}

}  // namespace macrofacet
