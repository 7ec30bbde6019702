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

#ifndef MACROFACET_UTILITY_H_
#define MACROFACET_UTILITY_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "macrofacet/chronicle.h"
#include "macrofacet/index_set.h"

namespace macrofacet {

inline constexpr double kValueTolerance = 1e-9;

// A normalized set function over an ordered ground. Implementations are pure:
// evaluate() and marginal_gain() have no observable side effects and may be
// called concurrently.
class UtilityFunction {
 public:
  virtual ~UtilityFunction() = default;

  virtual const std::vector<std::string>& ground() const = 0;
  virtual std::string kind() const = 0;
  virtual double evaluate(const IndexSet& s) const = 0;

  // Δ(x | s). The default is evaluate(s ∪ {x}) − evaluate(s).
  virtual double marginal_gain(const IndexSet& s, std::size_t x) const;

  std::size_t ground_size() const { return ground().size(); }
};

// Δ(x | s) for a set x.
double MarginalGain(const UtilityFunction& u, const IndexSet& s,
                    const IndexSet& x);

// Σ weights over the union of the covers of the chosen elements.
class WeightedCoverage final : public UtilityFunction {
 public:
  // weights[i] > 0 for each of `universe_size` items; covers[e] lists the
  // items element e covers. Throws ValidationError on bad input.
  WeightedCoverage(std::vector<std::string> ground, std::vector<double> weights,
                   std::vector<std::vector<std::size_t>> covers);

  const std::vector<std::string>& ground() const override { return ground_; }
  std::string kind() const override { return "coverage"; }
  double evaluate(const IndexSet& s) const override;
  double marginal_gain(const IndexSet& s, std::size_t x) const override;

  std::size_t universe_size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::vector<std::size_t>>& covers() const { return covers_; }

 private:
  using Words = std::vector<std::uint64_t>;
  Words UnionOf(const IndexSet& s) const;
  double WeightOf(const Words& bits) const;

  std::vector<std::string> ground_;
  std::vector<double> weights_;
  std::vector<std::vector<std::size_t>> covers_;
  std::vector<Words> cover_bits_;
};

// Σ weights of the chosen elements; weights must be non-negative.
class ModularUtility final : public UtilityFunction {
 public:
  ModularUtility(std::vector<std::string> ground, std::vector<double> weights);

  const std::vector<std::string>& ground() const override { return ground_; }
  std::string kind() const override { return "modular"; }
  double evaluate(const IndexSet& s) const override;
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<std::string> ground_;
  std::vector<double> weights_;
};

// U'(S) = U(Exp(S)): a facet-level utility seen through macro-facet
// expansion. Expansions are memoized per selection.
class LiftedUtility final : public UtilityFunction {
 public:
  // Throws ValidationError(GROUND_MISMATCH) if some facet of `mset` is not in
  // base.ground().
  LiftedUtility(std::shared_ptr<const UtilityFunction> base,
                std::shared_ptr<const MacroFacetSet> mset);

  const std::vector<std::string>& ground() const override { return ground_; }
  std::string kind() const override { return "lifted:" + base_->kind(); }
  double evaluate(const IndexSet& s) const override;

  const UtilityFunction& base() const { return *base_; }
  const MacroFacetSet& macro_facets() const { return *mset_; }

 private:
  IndexSet BaseExpansion(const IndexSet& s) const;

  std::shared_ptr<const UtilityFunction> base_;
  std::shared_ptr<const MacroFacetSet> mset_;
  std::vector<std::string> ground_;
  std::vector<std::size_t> facet_to_base_;
  mutable std::mutex memo_mutex_;
  mutable std::map<IndexSet, IndexSet> memo_;
};

// Replays a recorded table of marginal gains: (current set, candidate) ->
// gain. Set values are accumulated along recorded prefixes starting from
// U(∅) = 0. Unscripted queries throw ValidationError(UNSCRIPTED_QUERY) unless
// replay-tolerant, in which case a candidate's gain falls back to its entry
// at the largest recorded set contained in the query set.
class ScriptedUtility final : public UtilityFunction {
 public:
  struct Step {
    IndexSet set;
    std::vector<std::pair<std::size_t, double>> gains;
  };

  ScriptedUtility(std::vector<std::string> ground, std::vector<Step> steps,
                  bool replay_tolerant = false);

  const std::vector<std::string>& ground() const override { return ground_; }
  std::string kind() const override { return "scripted"; }
  double evaluate(const IndexSet& s) const override;
  double marginal_gain(const IndexSet& s, std::size_t x) const override;

  bool replay_tolerant() const { return replay_tolerant_; }
  const std::vector<Step>& steps() const { return steps_; }

 private:
  std::vector<std::string> ground_;
  std::vector<Step> steps_;
  bool replay_tolerant_;
  std::map<std::pair<IndexSet, std::size_t>, double> gains_;
  std::map<IndexSet, double> values_;
};

struct SubmodularityVerdict {
  bool pass = true;
  // "normalization", "monotonicity" or "submodularity".
  std::string property;
  std::string mode;  // "exhaustive" or "sampled"
  IndexSet a;
  IndexSet b;
  std::optional<std::size_t> e;
};

struct SubmodularityCheckOptions {
  std::size_t exhaustive_limit = 6;
  bool allow_sampling = false;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  double tolerance = kValueTolerance;
};

// Checks U(∅) = 0, Δ(e|B) ≥ 0 and Δ(e|A) ≥ Δ(e|B) for A ⊆ B, e ∉ B.
// Exhaustive up to `exhaustive_limit` ground elements; above that, random
// triples if sampling is allowed, otherwise LimitError.
SubmodularityVerdict VerifyMonotoneSubmodular(
    const UtilityFunction& u, const SubmodularityCheckOptions& options = {});

}  // namespace macrofacet

#endif  // MACROFACET_UTILITY_H_
