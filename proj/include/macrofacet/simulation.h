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

#ifndef MACROFACET_SIMULATION_H_
#define MACROFACET_SIMULATION_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "macrofacet/matroid.h"
#include "macrofacet/utility.h"

namespace macrofacet {

struct IntRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

// Random weighted-coverage instances under a partition matroid with an
// overall budget. Every distribution parameter is overridable.
struct ExperimentConfig {
  std::size_t trials = 5000;
  std::size_t num_macro = 14;
  std::size_t universe_size = 120;
  std::size_t num_groups = 4;
  double cover_probability = 0.15;
  double weight_lo = 0.1;
  double weight_hi = 1.0;
  // Per-group quota; unset means [1, group size].
  std::optional<IntRange> quota_range;
  IntRange budget_range{3, 8};
  std::uint64_t seed = 20260101;
  std::size_t bins = 50;
  std::size_t workers = 0;  // 0: hardware concurrency

  // Throws ValidationError on an unusable configuration.
  void Validate() const;
};

struct Instance {
  std::uint64_t seed = 0;
  std::shared_ptr<const WeightedCoverage> utility;
  QuotaTree tree;
};

// Seed of trial `trial` under `master` (splitmix64 over a counter), so
// trials can run in any order or on any worker.
std::uint64_t TrialSeed(std::uint64_t master, std::uint64_t trial);

Instance GenerateInstance(const ExperimentConfig& config,
                          std::uint64_t trial_seed);

struct TrialRecord {
  std::size_t trial = 0;
  double greedy = 0.0;
  double optimal = 0.0;
  double ratio = 0.0;
  std::uint64_t seed = 0;
};

struct Histogram {
  std::vector<double> edges;   // bins + 1 edges over [0.5, 1.0]
  std::vector<std::size_t> counts;
};

// Fixed-width bins over [0.5, 1.0]; the last bin is closed on the right.
// Values outside the range are clamped into the end bins so counts always
// sum to the input size. Throws ValidationError on empty input or bins == 0.
Histogram MakeHistogram(std::span<const double> ratios, std::size_t bins);

struct ExperimentReport {
  ExperimentConfig config;
  std::size_t trials = 0;
  double mean = 0.0;
  double ci_low = 0.0;   // mean ± 1.96·sd/√n
  double ci_high = 0.0;
  double min = 0.0;
  double p5 = 0.0;       // linear interpolation between order statistics
  double mass_near_one = 0.0;  // share of ratios in [0.95, 1.0 + tol]
  std::size_t below_half = 0;  // ratios < 0.5 − tol; must stay 0
  Histogram histogram;
  std::optional<double> wall_clock_seconds;
};

// Statistics over records, in trial order. Deterministic in the records.
ExperimentReport Summarize(const ExperimentConfig& config,
                           std::span<const TrialRecord> records);

struct ExperimentOutput {
  std::vector<TrialRecord> trials;
  ExperimentReport report;
};

// Greedy vs. brute-force optimum on `config.trials` instances. Trials run on
// `config.workers` threads; records are ordered by trial index.
ExperimentOutput RunExperiment(const ExperimentConfig& config);

std::string TrialsCsv(std::span<const TrialRecord> records);
std::vector<TrialRecord> ParseTrialsCsv(std::string_view csv);
std::string HistogramCsv(const Histogram& histogram);

}  // namespace macrofacet

#endif  // MACROFACET_SIMULATION_H_
