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

#include "macrofacet/cli.h"

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "macrofacet/chronicle.h"
#include "macrofacet/error.h"
#include "macrofacet/json_io.h"
#include "macrofacet/matroid.h"
#include "macrofacet/selection.h"
#include "macrofacet/simulation.h"
#include "macrofacet/utility.h"

namespace macrofacet {

namespace {

constexpr const char* kOutDirEnv = "MACROFACET_OUT_DIR";

struct Options {
  std::string in;
  std::string out;
  std::string constraints;
  std::string utility;
  std::uint64_t seed = 0;
  bool quiet = false;
  std::string algo = "greedy";
  bool trace = false;
  bool compare = false;
  bool replay_tolerant = false;
  bool timing = false;
  std::string out_dir;
  ExperimentConfig sim;
};

void Diagnose(std::ostream& err, const std::string& severity,
              const std::string& code, const std::string& text,
              const std::vector<std::string>& witness = {}) {
  Json d{{"severity", severity}, {"code", code}, {"text", text}, {"witness", witness}};
  err << d.dump() << "\n";
}

std::string SetText(const std::vector<std::string>& ids, const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + ids.at(s[i]);
  return out + "}";
}

std::vector<std::string> CounterexampleWitness(
    const std::vector<std::string>& ids, const IndexSet& a, const IndexSet& b,
    std::optional<std::size_t> x) {
  std::vector<std::string> w{"A=" + SetText(ids, a), "B=" + SetText(ids, b)};
  if (x) w.push_back("x=" + ids.at(*x));
  return w;
}

void Emit(const Options& o, std::ostream& out, const Json& j) {
  if (o.out.empty()) {
    out << Dump(j);
  } else {
    WriteFileAtomic(o.out, Dump(j));
  }
}

std::shared_ptr<const MacroFacetSet> LoadMacroFacets(const std::string& path) {
  return std::make_shared<const MacroFacetSet>(
      ParseMacroFacetSet(ReadJsonFile(path)));
}

QuotaTree LoadTree(const MacroFacetSet& mset, const std::string& path) {
  return BuildQuotaTree(mset.ids(), ParseConstraints(ReadJsonFile(path)));
}

int CmdCompile(const Options& o, std::ostream& out, std::ostream& err) {
  Chronicle chronicle = ParseChronicle(ReadJsonFile(o.in));
  for (const auto& w : chronicle.warnings()) {
    Diagnose(err, "warning", "ZERO_COST_FACET", w);
  }
  MacroFacetSet mset = Compile(chronicle);
  Emit(o, out, ToJson(mset));
  if (!o.quiet && !o.out.empty()) {
    std::size_t max_closure = 0;
    double total = 0.0;
    for (const auto& m : mset.macro_facets()) {
      max_closure = std::max(max_closure, m.closure.size());
      total += m.cost;
    }
    out << "macro-facets: " << mset.size() << "\n"
        << "max closure size: " << max_closure << "\n"
        << "total cost: " << total << "\n";
  }
  return kExitOk;
}

int CmdVerify(const Options& o, std::ostream& out, std::ostream& err) {
  auto mset = LoadMacroFacets(o.in);
  Json report;
  bool pass = true;

  std::optional<QuotaTree> tree;
  try {
    tree = LoadTree(*mset, o.constraints);
    report["laminarity"] = {{"pass", true}};
  } catch (const ValidationError& e) {
    if (e.code() != "LAMINARITY_VIOLATION") throw;
    report["laminarity"] = {{"pass", false}, {"witness", e.witness()}};
    Diagnose(err, "error", e.code(), e.what(), e.witness());
    pass = false;
  }

  if (tree) {
    if (tree->universe_size() <= kDefaultAxiomLimit) {
      AxiomVerdict v = VerifyMatroidAxioms(*tree);
      report["matroid_axioms"] = ToJson(v, *tree);
      if (!v.pass) {
        Diagnose(err, "error", "MATROID_AXIOM_VIOLATION", v.failed_axiom,
                 CounterexampleWitness(tree->universe(), v.a, v.b, v.x));
        pass = false;
      }
    } else {
      report["matroid_axioms"] = {{"pass", nullptr}, {"skipped", "universe above exhaustive limit"}};
    }
  }

  if (!o.utility.empty()) {
    auto u = ParseUtility(ReadJsonFile(o.utility), mset);
    SubmodularityCheckOptions opts;
    opts.allow_sampling = true;
    opts.seed = o.seed;
    try {
      SubmodularityVerdict v = VerifyMonotoneSubmodular(*u, opts);
      report["utility"] = ToJson(v, *u);
      if (!v.pass) {
        Diagnose(err, "error", "SUBMODULARITY_VIOLATION", v.property,
                 CounterexampleWitness(u->ground(), v.a, v.b, v.e));
        pass = false;
      }
    } catch (const ValidationError& e) {
      if (e.code() != "UNSCRIPTED_QUERY") throw;
      report["utility"] = {{"pass", nullptr}, {"skipped", "scripted utility does not define every set"}};
    }
  }

  report["pass"] = pass;
  Emit(o, out, report);
  return pass ? kExitOk : kExitValidation;
}

int CmdSelect(const Options& o, std::ostream& out, std::ostream&) {
  auto mset = LoadMacroFacets(o.in);
  QuotaTree tree = LoadTree(*mset, o.constraints);
  const bool tolerant = o.replay_tolerant || o.algo == "lazy";
  auto u = ParseUtility(ReadJsonFile(o.utility), mset, tolerant);

  auto run = [&](const std::string& algo) {
    SelectionResult r = algo == "lazy"      ? LazyGreedySelect(*u, tree)
                        : algo == "optimal" ? BruteForceOptimal(*u, tree)
                                            : GreedySelect(*u, tree);
    AttachExpansion(r, *mset);
    if (!IsIndependent(tree, Normalize(r.chosen))) {
      throw InvariantError("DEPENDENT_SELECTION",
                           algo + " returned a set violating a quota",
                           r.chosen_ids);
    }
    return r;
  };

  if (o.compare) {
    SelectionResult greedy = run(o.algo == "optimal" ? "greedy" : o.algo);
    SelectionResult optimal = run("optimal");
    const double ratio = ApproximationRatio(greedy, optimal);
    Emit(o, out, {{"greedy", ToJson(greedy, tree, o.trace)},
                  {"optimal", ToJson(optimal, tree, o.trace)},
                  {"ratio", ratio}});
    if (!o.quiet && !o.out.empty()) {
      out << "greedy value: " << greedy.value << "\n"
          << "optimal value: " << optimal.value << "\n"
          << "ratio: " << ratio << "\n";
    }
    return kExitOk;
  }

  SelectionResult r = run(o.algo);
  Emit(o, out, ToJson(r, tree, o.trace));
  if (!o.quiet && !o.out.empty()) {
    out << "chosen:";
    for (const auto& id : r.chosen_ids) out << " " << id;
    out << "\nvalue: " << r.value << "\n";
  }
  return kExitOk;
}

int CmdSimulate(const Options& o, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = o.sim;
  config.seed = o.seed;
  std::filesystem::path dir = o.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    dir = env != nullptr ? env : ".";
  }
  ExperimentOutput result = RunExperiment(config);
  WriteFileAtomic(dir / "trials.csv", TrialsCsv(result.trials));
  WriteFileAtomic(dir / "histogram.csv", HistogramCsv(result.report.histogram));
  WriteFileAtomic(dir / "report.json", Dump(ToJson(result.report, o.timing)));
  if (!o.quiet) {
    const auto& r = result.report;
    out << "trials: " << r.trials << "\n"
        << "mean ratio: " << r.mean << " (95% CI " << r.ci_low << ", "
        << r.ci_high << ")\n"
        << "min ratio: " << r.min << "\n"
        << "5th percentile: " << r.p5 << "\n"
        << "wall clock: " << r.wall_clock_seconds.value_or(0.0) << " s\n";
  }
  if (result.report.below_half > 0) {
    Diagnose(err, "error", "GUARANTEE_VIOLATED",
             std::to_string(result.report.below_half) +
                 " trials fell below the 1/2 ratio floor");
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Macro-facet compilation and matroid-constrained selection"};
  app.require_subcommand(1);
  Options o;

  auto shared = [&](CLI::App* cmd) {
    cmd->add_option("--out", o.out, "Output file (stdout if omitted)");
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_flag("--quiet", o.quiet, "Suppress the summary");
  };

  CLI::App* compile = app.add_subcommand("compile", "Condense a chronicle into macro-facets");
  compile->add_option("--in", o.in, "Chronicle JSON")->required();
  shared(compile);

  auto problem = [&](CLI::App* cmd, bool utility_required) {
    cmd->add_option("--in,--macro", o.in, "Compiled macro-facet JSON")->required();
    cmd->add_option("--constraints", o.constraints, "Constraint JSON")->required();
    auto* u = cmd->add_option("--utility", o.utility, "Utility JSON");
    if (utility_required) u->required();
    shared(cmd);
  };

  CLI::App* verify = app.add_subcommand("verify", "Check laminarity, matroid axioms and submodularity");
  problem(verify, false);

  CLI::App* select = app.add_subcommand("select", "Select macro-facets under the quota tree");
  problem(select, true);
  select->add_option("--algo", o.algo, "greedy | lazy | optimal")
      ->check(CLI::IsMember({"greedy", "lazy", "optimal"}));
  select->add_flag("--trace", o.trace, "Include the per-iteration trace");
  select->add_flag("--compare", o.compare, "Also run brute force and report the ratio");
  select->add_flag("--replay-tolerant", o.replay_tolerant,
                   "Let scripted utilities answer unscripted queries");

  CLI::App* optimal = app.add_subcommand("optimal", "Brute-force optimal selection");
  problem(optimal, true);
  optimal->add_flag("--trace", o.trace, "Include the trace");

  CLI::App* simulate = app.add_subcommand("simulate", "Greedy vs. optimal on random instances");
  simulate->add_option("--trials", o.sim.trials)->check(CLI::PositiveNumber);
  simulate->add_option("--macro", o.sim.num_macro)->check(CLI::PositiveNumber);
  simulate->add_option("--universe", o.sim.universe_size)->check(CLI::PositiveNumber);
  simulate->add_option("--groups", o.sim.num_groups)->check(CLI::PositiveNumber);
  simulate->add_option("--cover-probability", o.sim.cover_probability);
  simulate->add_option("--bins", o.sim.bins)->check(CLI::PositiveNumber);
  simulate->add_option("--workers", o.sim.workers, "Worker threads (0: all cores)");
  simulate->add_option("--out-dir", o.out_dir,
                       std::string("Output directory (default $") + kOutDirEnv + " or .)");
  simulate->add_flag("--timing", o.timing, "Record wall-clock time in report.json");
  o.seed = o.sim.seed;
  simulate->add_option("--seed", o.seed, "Master seed");
  simulate->add_flag("--quiet", o.quiet, "Suppress the summary");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*compile) return CmdCompile(o, out, err);
    if (*verify) return CmdVerify(o, out, err);
    if (*select) return CmdSelect(o, out, err);
    if (*optimal) {
      o.algo = "optimal";
      return CmdSelect(o, out, err);
    }
    if (*simulate) return CmdSimulate(o, out, err);
  } catch (const InvariantError& e) {
    Diagnose(err, "error", e.code(), e.what(), e.witness());
    return kExitInternal;
  } catch (const LimitError& e) {
    Diagnose(err, "error", e.code(), e.what(), e.witness());
    return kExitLimit;
  } catch (const ValidationError& e) {
    Diagnose(err, "error", e.code(), e.what(), e.witness());
    return kExitValidation;
  } catch (const std::exception& e) {
    Diagnose(err, "error", "INTERNAL_ERROR", e.what());
    return kExitInternal;
  }
  return kExitValidation;
}

}  // namespace macrofacet
