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

#include "macrofacet/utility.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <unordered_map>

#include "macrofacet/error.h"

namespace macrofacet {

namespace {

void CheckInGround(const UtilityFunction& u, const IndexSet& s) {
  for (std::size_t e : s) {
    if (e >= u.ground_size()) {
      throw ValidationError("OUT_OF_GROUND",
                            "element index " + std::to_string(e) +
                                " is outside the utility ground",
                            {std::to_string(e)});
    }
  }
}

void CheckUniqueGround(const std::vector<std::string>& ground) {
  std::vector<std::string> sorted = ground;
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) {
    throw ValidationError("DUPLICATE_GROUND_ELEMENT",
                          "ground element '" + *dup + "' appears twice",
                          {*dup});
  }
}

}  // namespace

double UtilityFunction::marginal_gain(const IndexSet& s, std::size_t x) const {
  return evaluate(WithElement(s, x)) - evaluate(s);
}

double MarginalGain(const UtilityFunction& u, const IndexSet& s,
                    const IndexSet& x) {
  CheckInGround(u, s);
  CheckInGround(u, x);
  return u.evaluate(Union(s, x)) - u.evaluate(s);
}

WeightedCoverage::WeightedCoverage(std::vector<std::string> ground,
                                   std::vector<double> weights,
                                   std::vector<std::vector<std::size_t>> covers)
    : ground_(std::move(ground)),
      weights_(std::move(weights)),
      covers_(std::move(covers)) {
  CheckUniqueGround(ground_);
  if (covers_.size() != ground_.size()) {
    throw ValidationError("GROUND_MISMATCH",
                          "coverage needs one cover per ground element");
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0) {
      throw ValidationError("INVALID_WEIGHT",
                            "coverage weight " + std::to_string(i) +
                                " must be positive",
                            {std::to_string(i)});
    }
  }
  const std::size_t words = (weights_.size() + 63) / 64;
  cover_bits_.assign(covers_.size(), Words(words, 0));
  for (std::size_t e = 0; e < covers_.size(); ++e) {
    std::sort(covers_[e].begin(), covers_[e].end());
    covers_[e].erase(std::unique(covers_[e].begin(), covers_[e].end()),
                     covers_[e].end());
    for (std::size_t item : covers_[e]) {
      if (item >= weights_.size()) {
        throw ValidationError("INVALID_COVER",
                              "'" + ground_[e] + "' covers item " +
                                  std::to_string(item) +
                                  " outside the universe",
                              {ground_[e], std::to_string(item)});
      }
      cover_bits_[e][item / 64] |= 1ULL << (item % 64);
    }
  }
}

WeightedCoverage::Words WeightedCoverage::UnionOf(const IndexSet& s) const {
  Words bits((weights_.size() + 63) / 64, 0);
  for (std::size_t e : s) {
    if (e >= cover_bits_.size()) {
      throw ValidationError("OUT_OF_GROUND",
                            "element index " + std::to_string(e) +
                                " is outside the utility ground",
                            {std::to_string(e)});
    }
    const Words& c = cover_bits_[e];
    for (std::size_t w = 0; w < bits.size(); ++w) bits[w] |= c[w];
  }
  return bits;
}

double WeightedCoverage::WeightOf(const Words& bits) const {
  double total = 0.0;
  for (std::size_t w = 0; w < bits.size(); ++w) {
    for (std::uint64_t word = bits[w]; word != 0; word &= word - 1) {
      total += weights_[w * 64 + std::countr_zero(word)];
    }
  }
  return total;
}

double WeightedCoverage::evaluate(const IndexSet& s) const {
  return WeightOf(UnionOf(s));
}

double WeightedCoverage::marginal_gain(const IndexSet& s, std::size_t x) const {
  Words covered = UnionOf(s);
  if (x >= cover_bits_.size()) {
    throw ValidationError("OUT_OF_GROUND",
                          "element index " + std::to_string(x) +
                              " is outside the utility ground",
                          {std::to_string(x)});
  }
  const Words& c = cover_bits_[x];
  for (std::size_t w = 0; w < covered.size(); ++w) covered[w] = c[w] & ~covered[w];
  return WeightOf(covered);
}

ModularUtility::ModularUtility(std::vector<std::string> ground,
                               std::vector<double> weights)
    : ground_(std::move(ground)), weights_(std::move(weights)) {
  CheckUniqueGround(ground_);
  if (weights_.size() != ground_.size()) {
    throw ValidationError("GROUND_MISMATCH",
                          "modular utility needs one weight per element");
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
      throw ValidationError("INVALID_WEIGHT",
                            "weight of '" + ground_[i] +
                                "' must be non-negative",
                            {ground_[i]});
    }
  }
}

double ModularUtility::evaluate(const IndexSet& s) const {
  CheckInGround(*this, s);
  double total = 0.0;
  for (std::size_t e : s) total += weights_[e];
  return total;
}

LiftedUtility::LiftedUtility(std::shared_ptr<const UtilityFunction> base,
                             std::shared_ptr<const MacroFacetSet> mset)
    : base_(std::move(base)), mset_(std::move(mset)), ground_(mset_->ids()) {
  std::unordered_map<std::string, std::size_t> base_index;
  for (std::size_t i = 0; i < base_->ground().size(); ++i) {
    base_index.emplace(base_->ground()[i], i);
  }
  for (const Facet& f : mset_->facets()) {
    auto it = base_index.find(f.id);
    if (it == base_index.end()) {
      throw ValidationError("GROUND_MISMATCH",
                            "facet '" + f.id +
                                "' is not in the base utility's ground",
                            {f.id});
    }
    facet_to_base_.push_back(it->second);
  }
}

IndexSet LiftedUtility::BaseExpansion(const IndexSet& s) const {
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
  }
  IndexSet mapped;
  for (std::size_t f : Expand(*mset_, s)) mapped.push_back(facet_to_base_[f]);
  mapped = Normalize(std::move(mapped));
  std::lock_guard<std::mutex> lock(memo_mutex_);
  return memo_.emplace(s, std::move(mapped)).first->second;
}

double LiftedUtility::evaluate(const IndexSet& s) const {
  return base_->evaluate(BaseExpansion(s));
}

ScriptedUtility::ScriptedUtility(std::vector<std::string> ground,
                                 std::vector<Step> steps, bool replay_tolerant)
    : ground_(std::move(ground)),
      steps_(std::move(steps)),
      replay_tolerant_(replay_tolerant) {
  CheckUniqueGround(ground_);
  values_[IndexSet{}] = 0.0;
  for (Step& step : steps_) {
    step.set = Normalize(std::move(step.set));
    CheckInGround(*this, step.set);
    for (const auto& [candidate, gain] : step.gains) {
      CheckInGround(*this, IndexSet{candidate});
      if (!std::isfinite(gain)) {
        throw ValidationError("INVALID_GAIN", "scripted gain is not finite");
      }
      auto [it, fresh] = gains_.emplace(std::make_pair(step.set, candidate), gain);
      if (!fresh && it->second != gain) {
        throw ValidationError("INCONSISTENT_SCRIPT",
                              "conflicting gains for '" + ground_[candidate] +
                                  "' at the same set",
                              {ground_[candidate]});
      }
    }
    auto base = values_.find(step.set);
    if (base == values_.end()) continue;
    const double base_value = base->second;
    for (const auto& [candidate, gain] : step.gains) {
      if (Contains(step.set, candidate)) continue;
      IndexSet next = WithElement(step.set, candidate);
      auto [it, fresh] = values_.emplace(next, base_value + gain);
      if (!fresh && std::abs(it->second - (base_value + gain)) > kValueTolerance) {
        throw ValidationError("INCONSISTENT_SCRIPT",
                              "scripted gains imply two values for one set");
      }
    }
  }
}

double ScriptedUtility::evaluate(const IndexSet& s) const {
  CheckInGround(*this, s);
  auto it = values_.find(s);
  if (it == values_.end()) {
    std::vector<std::string> witness;
    for (std::size_t e : s) witness.push_back(ground_[e]);
    throw ValidationError("UNSCRIPTED_QUERY",
                          "no scripted value for the requested set", witness);
  }
  return it->second;
}

double ScriptedUtility::marginal_gain(const IndexSet& s, std::size_t x) const {
  CheckInGround(*this, s);
  CheckInGround(*this, IndexSet{x});
  if (Contains(s, x)) return 0.0;
  auto it = gains_.find({s, x});
  if (it != gains_.end()) return it->second;
  if (replay_tolerant_) {
    const Step* nearest = nullptr;
    double gain = 0.0;
    for (const Step& step : steps_) {
      if (!IsSubset(step.set, s)) continue;
      for (const auto& [candidate, g] : step.gains) {
        if (candidate != x) continue;
        if (nearest == nullptr || step.set.size() >= nearest->set.size()) {
          nearest = &step;
          gain = g;
        }
      }
    }
    if (nearest != nullptr) return gain;
  }
  std::vector<std::string> witness{ground_[x]};
  for (std::size_t e : s) witness.push_back(ground_[e]);
  throw ValidationError("UNSCRIPTED_QUERY",
                        "no scripted gain for '" + ground_[x] +
                            "' at the requested set",
                        witness);
}

SubmodularityVerdict VerifyMonotoneSubmodular(
    const UtilityFunction& u, const SubmodularityCheckOptions& options) {
  const std::size_t n = u.ground_size();
  SubmodularityVerdict v;
  const double tol = options.tolerance;

  if (std::abs(u.evaluate({})) > tol) {
    v.pass = false;
    v.property = "normalization";
    v.mode = "exhaustive";
    return v;
  }

  if (n <= options.exhaustive_limit && n < 25) {
    v.mode = "exhaustive";
    using Mask = unsigned long long;
    const Mask full = 1ULL << n;
    std::vector<double> value(full);
    for (Mask m = 0; m < full; ++m) value[m] = u.evaluate(FromMask(m));
    for (Mask b = 0; b < full; ++b) {
      for (std::size_t e = 0; e < n; ++e) {
        const Mask bit = 1ULL << e;
        if (b & bit) continue;
        const double gain_b = value[b | bit] - value[b];
        if (gain_b < -tol) {
          v.pass = false;
          v.property = "monotonicity";
          v.a = FromMask(b);
          v.b = FromMask(b);
          v.e = e;
          return v;
        }
        // Every A ⊆ B, including B itself and ∅.
        for (Mask a = b;; a = (a - 1) & b) {
          const double gain_a = value[a | bit] - value[a];
          if (gain_a < gain_b - tol) {
            v.pass = false;
            v.property = "submodularity";
            v.a = FromMask(a);
            v.b = FromMask(b);
            v.e = e;
            return v;
          }
          if (a == 0) break;
        }
      }
    }
    return v;
  }

  if (!options.allow_sampling) {
    throw LimitError("GROUND_TOO_LARGE",
                     "exhaustive submodularity check limited to " +
                         std::to_string(options.exhaustive_limit) +
                         " elements, got " + std::to_string(n),
                     {std::to_string(n)});
  }
  v.mode = "sampled";
  if (n == 0) return v;
  std::mt19937_64 rng(options.seed);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t t = 0; t < options.samples; ++t) {
    IndexSet b, outside;
    for (std::size_t i = 0; i < n; ++i) {
      (coin(rng) ? b : outside).push_back(i);
    }
    if (outside.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, outside.size() - 1);
    const std::size_t e = outside[pick(rng)];
    IndexSet a;
    for (std::size_t i : b) {
      if (coin(rng)) a.push_back(i);
    }
    const double gain_b = u.evaluate(WithElement(b, e)) - u.evaluate(b);
    const double gain_a = u.evaluate(WithElement(a, e)) - u.evaluate(a);
    if (gain_b < -tol) {
      v.pass = false;
      v.property = "monotonicity";
      v.a = b;
      v.b = b;
      v.e = e;
      return v;
    }
    if (gain_a < gain_b - tol) {
      v.pass = false;
      v.property = "submodularity";
      v.a = std::move(a);
      v.b = std::move(b);
      v.e = e;
      return v;
    }
  }
  return v;
}

}  // namespace macrofacet
