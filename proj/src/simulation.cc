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

#include "macrofacet/simulation.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "macrofacet/error.h"
#include "macrofacet/selection.h"

namespace macrofacet {

void ExperimentConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw ValidationError("INVALID_CONFIG", "invalid experiment config: " + what,
                          {what});
  };
  if (trials == 0) fail("trials must be positive");
  if (num_macro == 0) fail("num_macro must be positive");
  if (num_macro > kDefaultBruteForceCeiling) {
    fail("num_macro exceeds the brute-force ceiling");
  }
  if (universe_size == 0) fail("universe_size must be positive");
  if (num_groups == 0 || num_groups > num_macro) {
    fail("num_groups must be in [1, num_macro]");
  }
  if (!(cover_probability > 0.0 && cover_probability < 1.0)) {
    fail("cover_probability must be in (0, 1)");
  }
  if (!(weight_lo > 0.0 && weight_lo <= weight_hi && std::isfinite(weight_hi))) {
    fail("weights need 0 < lo <= hi");
  }
  if (quota_range && quota_range->lo > quota_range->hi) {
    fail("quota_range is empty");
  }
  if (budget_range.lo > budget_range.hi) fail("budget_range is empty");
  if (bins == 0) fail("bins must be positive");
}

std::uint64_t TrialSeed(std::uint64_t master, std::uint64_t trial) {
  std::uint64_t z = master + (trial + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Instance GenerateInstance(const ExperimentConfig& config,
                          std::uint64_t trial_seed) {
  config.Validate();
  std::mt19937_64 rng(trial_seed);

  const std::size_t width =
      std::max<std::size_t>(2, std::to_string(config.num_macro - 1).size());
  std::vector<std::string> ids;
  for (std::size_t m = 0; m < config.num_macro; ++m) {
    std::string digits = std::to_string(m);
    ids.push_back("m" + std::string(width - digits.size(), '0') + digits);
  }

  std::uniform_real_distribution<double> weight(config.weight_lo,
                                                config.weight_hi);
  std::vector<double> weights(config.universe_size);
  for (double& w : weights) w = weight(rng);

  std::bernoulli_distribution covers_item(config.cover_probability);
  std::vector<std::vector<std::size_t>> covers(config.num_macro);
  for (auto& cover : covers) {
    for (std::size_t item = 0; item < config.universe_size; ++item) {
      if (covers_item(rng)) cover.push_back(item);
    }
  }

  std::vector<std::size_t> order(config.num_macro);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<QuotaConstraint> groups(config.num_groups);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    groups[pos % config.num_groups].members.push_back(ids[order[pos]]);
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    groups[g].name = "G" + std::to_string(g + 1);
    std::sort(groups[g].members.begin(), groups[g].members.end());
    IntRange range = config.quota_range.value_or(
        IntRange{1, groups[g].members.size()});
    groups[g].quota =
        std::uniform_int_distribution<std::size_t>(range.lo, range.hi)(rng);
  }
  const std::size_t budget = std::uniform_int_distribution<std::size_t>(
      config.budget_range.lo, config.budget_range.hi)(rng);

  Instance instance;
  instance.seed = trial_seed;
  instance.utility = std::make_shared<WeightedCoverage>(
      ids, std::move(weights), std::move(covers));
  instance.tree = PartitionMatroid(ids, std::move(groups), budget);
  return instance;
}

Histogram MakeHistogram(std::span<const double> ratios, std::size_t bins) {
  if (ratios.empty()) {
    throw ValidationError("EMPTY_INPUT", "histogram of an empty sample");
  }
  if (bins == 0) throw ValidationError("INVALID_BINS", "bins must be positive");
  constexpr double kLo = 0.5;
  constexpr double kHi = 1.0;
  const double width = (kHi - kLo) / static_cast<double>(bins);
  Histogram h;
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges.push_back(i == bins ? kHi : kLo + width * static_cast<double>(i));
  }
  h.counts.assign(bins, 0);
  for (double r : ratios) {
    std::size_t bin = 0;
    if (r >= kHi) {
      bin = bins - 1;
    } else if (r > kLo) {
      bin = std::min(bins - 1, static_cast<std::size_t>((r - kLo) / width));
      // Guard the floor against edge rounding.
      while (bin + 1 < bins && r >= h.edges[bin + 1]) ++bin;
      while (bin > 0 && r < h.edges[bin]) --bin;
    }
    ++h.counts[bin];
  }
  return h;
}

ExperimentReport Summarize(const ExperimentConfig& config,
                           std::span<const TrialRecord> records) {
  if (records.empty()) {
    throw ValidationError("EMPTY_INPUT", "no trial records to summarize");
  }
  ExperimentReport report;
  report.config = config;
  report.trials = records.size();
  std::vector<double> ratios;
  ratios.reserve(records.size());
  for (const auto& r : records) ratios.push_back(r.ratio);

  const double n = static_cast<double>(ratios.size());
  double sum = 0.0;
  for (double r : ratios) sum += r;
  report.mean = sum / n;
  double sq = 0.0;
  for (double r : ratios) sq += (r - report.mean) * (r - report.mean);
  const double sd = ratios.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
  const double half_width = 1.96 * sd / std::sqrt(n);
  report.ci_low = report.mean - half_width;
  report.ci_high = report.mean + half_width;

  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  report.min = sorted.front();
  const double h = (n - 1.0) * 0.05;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  report.p5 = sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);

  std::size_t near_one = 0;
  for (double r : ratios) {
    if (r >= 0.95 && r <= 1.0 + kValueTolerance) ++near_one;
    if (r < 0.5 - kValueTolerance) ++report.below_half;
  }
  report.mass_near_one = static_cast<double>(near_one) / n;
  report.histogram = MakeHistogram(ratios, config.bins);
  return report;
}

namespace {

[[noreturn]] void RethrowWithTrial(std::exception_ptr error, std::size_t trial) {
  const std::string prefix = "trial " + std::to_string(trial) + ": ";
  try {
    std::rethrow_exception(error);
  } catch (const InvariantError& e) {
    throw InvariantError(e.code(), prefix + e.what(), e.witness());
  } catch (const LimitError& e) {
    throw LimitError(e.code(), prefix + e.what(), e.witness());
  } catch (const ValidationError& e) {
    throw ValidationError(e.code(), prefix + e.what(), e.witness());
  }
}

}  // namespace

ExperimentOutput RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<TrialRecord> records(config.trials);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t error_trial = config.trials;

  auto worker = [&] {
    for (std::size_t t = next++; t < config.trials; t = next++) {
      try {
        const std::uint64_t seed = TrialSeed(config.seed, t);
        Instance inst = GenerateInstance(config, seed);
        SelectionResult greedy = GreedySelect(*inst.utility, inst.tree);
        SelectionResult optimal = BruteForceOptimal(*inst.utility, inst.tree);
        records[t] = {t, greedy.value, optimal.value,
                      ApproximationRatio(greedy, optimal), seed};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (t < error_trial) {
          error_trial = t;
          first_error = std::current_exception();
        }
      }
    }
  };

  std::size_t workers = config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.trials);
  std::vector<std::thread> threads;
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (first_error) RethrowWithTrial(first_error, error_trial);

  ExperimentOutput out;
  out.trials = std::move(records);
  out.report = Summarize(config, out.trials);
  out.report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

namespace {

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string TrialsCsv(std::span<const TrialRecord> records) {
  std::string out = "trial,greedy,optimal,ratio,seed\n";
  for (const auto& r : records) {
    out += std::to_string(r.trial) + "," + FormatDouble(r.greedy) + "," +
           FormatDouble(r.optimal) + "," + FormatDouble(r.ratio) + "," +
           std::to_string(r.seed) + "\n";
  }
  return out;
}

std::vector<TrialRecord> ParseTrialsCsv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "trial,greedy,optimal,ratio,seed") {
    throw ValidationError("BAD_CSV_HEADER", "unexpected trials.csv header");
  }
  std::vector<TrialRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    TrialRecord r;
    unsigned long long trial = 0, seed = 0;
    if (std::sscanf(line.c_str(), "%llu,%lf,%lf,%lf,%llu", &trial, &r.greedy,
                    &r.optimal, &r.ratio, &seed) != 5) {
      throw ValidationError("BAD_CSV_ROW",
                            "malformed trials.csv row " + std::to_string(line_no),
                            {std::to_string(line_no)});
    }
    r.trial = trial;
    r.seed = seed;
    out.push_back(r);
  }
  return out;
}

std::string HistogramCsv(const Histogram& histogram) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    out += FormatDouble(histogram.edges[i]) + "," +
           FormatDouble(histogram.edges[i + 1]) + "," +
           std::to_string(histogram.counts[i]) + "\n";
  }
  return out;
}

}  // namespace macrofacet
