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

#include "macrofacet/json_io.h"

#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

#include "macrofacet/error.h"

namespace macrofacet {

namespace {

[[noreturn]] void SchemaError(const std::string& path, const std::string& what) {
  throw ValidationError("SCHEMA_ERROR", path + ": " + what, {path});
}

const Json& Object(const Json& j, const std::string& path) {
  if (!j.is_object()) SchemaError(path, "expected an object");
  return j;
}

const Json& Array(const Json& j, const std::string& path) {
  if (!j.is_array()) SchemaError(path, "expected an array");
  return j;
}

const Json* Optional(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::string String(const Json& j, const std::string& path) {
  if (!j.is_string()) SchemaError(path, "expected a string");
  return j.get<std::string>();
}

double Number(const Json& j, const std::string& path) {
  if (!j.is_number()) SchemaError(path, "expected a number");
  return j.get<double>();
}

std::size_t Count(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer()) SchemaError(path, "expected a non-negative integer");
  SchemaError(path, "expected an integer");
}

std::vector<std::string> StringList(const Json& j, const std::string& path) {
  Array(j, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(String(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string At(const std::string& path, const std::string& key) {
  return path + "." + key;
}

std::string At(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& Required(const Json& obj, const char* key, const std::string& path) {
  const Json* v = Optional(obj, key);
  if (v == nullptr) SchemaError(At(path, key), std::string("missing field '") + key + "'");
  return *v;
}

std::vector<Facet> ParseFacets(const Json& arr, const std::string& path) {
  Array(arr, path);
  std::vector<Facet> facets;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = At(path, i);
    const Json& f = Object(arr[i], p);
    Facet facet;
    facet.id = String(Required(f, "id", p), At(p, "id"));
    if (const Json* label = Optional(f, "label")) {
      facet.label = String(*label, At(p, "label"));
    }
    if (const Json* cost = Optional(f, "cost")) {
      facet.cost = Number(*cost, At(p, "cost"));
    }
    facets.push_back(std::move(facet));
  }
  return facets;
}

Json FacetsJson(const std::vector<Facet>& facets) {
  Json arr = Json::array();
  for (const Facet& f : facets) {
    arr.push_back({{"id", f.id}, {"label", f.label}, {"cost", f.cost}});
  }
  return arr;
}

Json QuotaJson(std::size_t quota) {
  return quota == kUnboundedQuota ? Json(nullptr) : Json(quota);
}

Json IdList(const std::vector<std::string>& ids, const IndexSet& s) {
  Json arr = Json::array();
  for (std::size_t e : s) arr.push_back(ids.at(e));
  return arr;
}

// Ground ids for a utility: macro-facet ids, or facet ids to be lifted.
std::vector<std::string> GroundFor(const MacroFacetSet& mset, bool over_facets) {
  if (!over_facets) return mset.ids();
  std::vector<std::string> out;
  for (const Facet& f : mset.facets()) out.push_back(f.id);
  return out;
}

// Maps an object keyed by ground ids onto ground positions. Absent ids keep
// their default (no cover, zero weight).
template <typename F>
void ForEachGroundKey(const Json& obj, const std::string& path,
                      const std::vector<std::string>& ground, F&& f) {
  Object(obj, path);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ground.size(); ++i) index.emplace(ground[i], i);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    auto found = index.find(it.key());
    if (found == index.end()) {
      throw ValidationError("GROUND_MISMATCH",
                            At(path, it.key()) + ": '" + it.key() +
                                "' is not in the utility ground",
                            {At(path, it.key())});
    }
    f(found->second, it.value(), At(path, it.key()));
  }
}

}  // namespace

Chronicle ParseChronicle(const Json& j) {
  const std::string root = "$";
  Object(j, root);
  std::vector<Facet> facets =
      ParseFacets(Required(j, "facets", root), At(root, "facets"));
  std::vector<Edge> edges;
  if (const Json* arr = Optional(j, "edges")) {
    const std::string p = At(root, "edges");
    Array(*arr, p);
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string ep = At(p, i);
      const Json& e = Array((*arr)[i], ep);
      if (e.size() != 2) SchemaError(ep, "expected [source, target]");
      edges.push_back({String(e[0], At(ep, 0)), String(e[1], At(ep, 1))});
    }
  }
  return Chronicle(std::move(facets), std::move(edges));
}

Json ToJson(const Chronicle& chronicle) {
  Json edges = Json::array();
  for (const Edge& e : chronicle.edges()) edges.push_back({e.source, e.target});
  return {{"facets", FacetsJson(chronicle.facets())}, {"edges", edges}};
}

MacroFacetSet ParseMacroFacetSet(const Json& j) {
  const std::string root = "$";
  Object(j, root);
  std::vector<Facet> facets =
      ParseFacets(Required(j, "facets", root), At(root, "facets"));
  std::map<std::string, std::size_t> facet_index;
  for (std::size_t i = 0; i < facets.size(); ++i) facet_index.emplace(facets[i].id, i);

  auto facet_indices = [&](const Json& arr, const std::string& path) {
    IndexSet out;
    std::vector<std::string> ids = StringList(arr, path);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto it = facet_index.find(ids[i]);
      if (it == facet_index.end()) {
        throw ValidationError("UNKNOWN_FACET",
                              At(path, i) + ": unknown facet '" + ids[i] + "'",
                              {At(path, i)});
      }
      out.push_back(it->second);
    }
    return out;
  };

  std::vector<MacroFacet> macros;
  std::map<std::string, std::size_t> macro_index;
  const std::string mp = At(root, "macro_facets");
  const Json& arr = Array(Required(j, "macro_facets", root), mp);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = At(mp, i);
    const Json& m = Object(arr[i], p);
    MacroFacet mf;
    mf.id = String(Required(m, "id", p), At(p, "id"));
    mf.members = facet_indices(Required(m, "members", p), At(p, "members"));
    mf.closure = facet_indices(Required(m, "closure", p), At(p, "closure"));
    mf.cost = Number(Required(m, "cost", p), At(p, "cost"));
    macro_index.emplace(mf.id, i);
    macros.push_back(std::move(mf));
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (const Json* e = Optional(j, "condensation_edges")) {
    const std::string ep = At(root, "condensation_edges");
    Array(*e, ep);
    for (std::size_t i = 0; i < e->size(); ++i) {
      const std::string p = At(ep, i);
      const Json& pair = Array((*e)[i], p);
      if (pair.size() != 2) SchemaError(p, "expected [source, target]");
      std::size_t ends[2];
      for (std::size_t k = 0; k < 2; ++k) {
        std::string id = String(pair[k], At(p, k));
        auto it = macro_index.find(id);
        if (it == macro_index.end()) {
          throw ValidationError("UNKNOWN_MACRO_FACET",
                                At(p, k) + ": unknown macro-facet '" + id + "'",
                                {At(p, k)});
        }
        ends[k] = it->second;
      }
      edges.emplace_back(ends[0], ends[1]);
    }
  }
  return MacroFacetSet(std::move(facets), std::move(macros), std::move(edges));
}

Json ToJson(const MacroFacetSet& mset) {
  std::vector<std::string> facet_ids;
  for (const Facet& f : mset.facets()) facet_ids.push_back(f.id);
  Json macros = Json::array();
  for (const MacroFacet& m : mset.macro_facets()) {
    macros.push_back({{"id", m.id},
                      {"members", IdList(facet_ids, m.members)},
                      {"closure", IdList(facet_ids, m.closure)},
                      {"cost", m.cost}});
  }
  Json edges = Json::array();
  for (const auto& [u, v] : mset.condensation_edges()) {
    edges.push_back({mset.macro_facets()[u].id, mset.macro_facets()[v].id});
  }
  return {{"facets", FacetsJson(mset.facets())},
          {"macro_facets", macros},
          {"condensation_edges", edges}};
}

std::vector<QuotaConstraint> ParseConstraints(const Json& j) {
  const std::string root = "$";
  Object(j, root);
  std::vector<QuotaConstraint> out;
  if (const Json* arr = Optional(j, "constraints")) {
    const std::string cp = At(root, "constraints");
    Array(*arr, cp);
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string p = At(cp, i);
      const Json& c = Object((*arr)[i], p);
      QuotaConstraint qc;
      if (const Json* name = Optional(c, "name")) qc.name = String(*name, At(p, "name"));
      if (qc.name.empty()) qc.name = "A" + std::to_string(i + 1);
      qc.members = StringList(Required(c, "members", p), At(p, "members"));
      qc.quota = Count(Required(c, "quota", p), At(p, "quota"));
      out.push_back(std::move(qc));
    }
  }
  if (const Json* arr = Optional(j, "exclusive")) {
    const std::string xp = At(root, "exclusive");
    Array(*arr, xp);
    for (std::size_t i = 0; i < arr->size(); ++i) {
      out.push_back({"X" + std::to_string(i + 1),
                     StringList((*arr)[i], At(xp, i)), 1});
    }
  }
  return out;
}

Json ToJson(const QuotaTree& tree) {
  Json nodes = Json::array();
  for (const QuotaNode& n : tree.nodes()) {
    nodes.push_back(
        {{"name", n.name},
         {"members", IdList(tree.universe(), n.members)},
         {"quota", QuotaJson(n.quota)},
         {"parent", n.parent ? Json(tree.node(*n.parent).name) : Json(nullptr)},
         {"depth", n.depth}});
  }
  return {{"universe", tree.universe()}, {"height", tree.height()}, {"nodes", nodes}};
}

std::shared_ptr<const UtilityFunction> ParseUtility(
    const Json& j, std::shared_ptr<const MacroFacetSet> mset,
    bool replay_tolerant) {
  const std::string root = "$";
  Object(j, root);
  const std::string kind = String(Required(j, "kind", root), At(root, "kind"));

  std::string over = kind == "modular" ? "facets" : "macro";
  if (const Json* o = Optional(j, "over")) over = String(*o, At(root, "over"));
  if (over != "macro" && over != "facets") {
    SchemaError(At(root, "over"), "expected \"macro\" or \"facets\"");
  }
  const bool over_facets = over == "facets";
  const std::vector<std::string> ground = GroundFor(*mset, over_facets);

  std::shared_ptr<const UtilityFunction> base;
  if (kind == "coverage") {
    const std::size_t universe = Count(Required(j, "universe", root), At(root, "universe"));
    const std::string wp = At(root, "weights");
    const Json& w = Array(Required(j, "weights", root), wp);
    if (w.size() != universe) SchemaError(wp, "expected one weight per universe item");
    std::vector<double> weights;
    for (std::size_t i = 0; i < w.size(); ++i) weights.push_back(Number(w[i], At(wp, i)));
    std::vector<std::vector<std::size_t>> covers(ground.size());
    ForEachGroundKey(Required(j, "covers", root), At(root, "covers"), ground,
                     [&](std::size_t e, const Json& v, const std::string& p) {
                       Array(v, p);
                       for (std::size_t i = 0; i < v.size(); ++i) {
                         covers[e].push_back(Count(v[i], At(p, i)));
                       }
                     });
    base = std::make_shared<WeightedCoverage>(ground, std::move(weights),
                                              std::move(covers));
  } else if (kind == "modular") {
    std::vector<double> weights(ground.size(), 0.0);
    ForEachGroundKey(Required(j, "weights", root), At(root, "weights"), ground,
                     [&](std::size_t e, const Json& v, const std::string& p) {
                       weights[e] = Number(v, p);
                     });
    base = std::make_shared<ModularUtility>(ground, std::move(weights));
  } else if (kind == "scripted") {
    if (over_facets) SchemaError(At(root, "over"), "scripted utilities are over macro-facets");
    if (const Json* t = Optional(j, "replay_tolerant")) {
      if (!t->is_boolean()) SchemaError(At(root, "replay_tolerant"), "expected a boolean");
      replay_tolerant = replay_tolerant || t->get<bool>();
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ground.size(); ++i) index.emplace(ground[i], i);
    auto lookup = [&](const std::string& id, const std::string& p) {
      auto it = index.find(id);
      if (it == index.end()) {
        throw ValidationError("GROUND_MISMATCH",
                              p + ": '" + id + "' is not a macro-facet", {p});
      }
      return it->second;
    };
    std::vector<ScriptedUtility::Step> steps;
    const std::string tp = At(root, "trace");
    const Json& trace = Array(Required(j, "trace", root), tp);
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const std::string p = At(tp, i);
      const Json& s = Object(trace[i], p);
      ScriptedUtility::Step step;
      std::vector<std::string> ids = StringList(Required(s, "set", p), At(p, "set"));
      for (std::size_t k = 0; k < ids.size(); ++k) {
        step.set.push_back(lookup(ids[k], At(At(p, "set"), k)));
      }
      const std::string gp = At(p, "gains");
      const Json& gains = Object(Required(s, "gains", p), gp);
      for (auto it = gains.begin(); it != gains.end(); ++it) {
        step.gains.emplace_back(lookup(it.key(), At(gp, it.key())),
                                Number(it.value(), At(gp, it.key())));
      }
      steps.push_back(std::move(step));
    }
    return std::make_shared<ScriptedUtility>(ground, std::move(steps),
                                             replay_tolerant);
  } else {
    SchemaError(At(root, "kind"), "unknown utility kind '" + kind + "'");
  }

  if (over_facets) return std::make_shared<LiftedUtility>(base, mset);
  return base;
}

Json ToJson(const SelectionResult& result, const QuotaTree& tree,
            bool include_trace) {
  const auto& ids = tree.universe();
  Json j;
  j["algorithm"] = result.algorithm;
  j["chosen"] = result.chosen_ids;
  j["value"] = result.value;
  j["evaluations"] = result.evaluations;
  if (result.expansion) {
    j["expansion"] = std::vector<std::string>(result.expansion->begin(),
                                              result.expansion->end());
  }
  if (result.cost) j["cost"] = *result.cost;

  Json trace;
  trace["stop_reason"] = ToString(result.trace.stop_reason);
  if (result.trace.stop_candidate) {
    trace["stop_candidate"] = ids.at(*result.trace.stop_candidate);
    trace["stop_gain"] = result.trace.stop_gain;
  }
  if (include_trace) {
    Json iterations = Json::array();
    for (const TraceStep& step : result.trace.iterations) {
      Json checks = Json::array();
      for (const NodeCheck& c : step.checks) {
        checks.push_back({{"node", tree.node(c.node).name},
                          {"count_after", c.count_after},
                          {"quota", QuotaJson(c.quota)},
                          {"ok", c.ok}});
      }
      iterations.push_back(
          {{"candidate", ids.at(step.candidate)},
           {"gain", step.gain},
           {"accepted", step.accepted},
           {"violated_node", step.violated_node
                                 ? Json(tree.node(*step.violated_node).name)
                                 : Json(nullptr)},
           {"checks", checks},
           {"remaining", step.remaining}});
    }
    trace["iterations"] = iterations;
  }
  j["trace"] = trace;
  return j;
}

Json ToJson(const AxiomVerdict& verdict, const QuotaTree& tree) {
  Json j{{"pass", verdict.pass}};
  if (!verdict.pass) {
    j["failed_axiom"] = verdict.failed_axiom;
    j["a"] = IdList(tree.universe(), verdict.a);
    j["b"] = IdList(tree.universe(), verdict.b);
    j["x"] = verdict.x ? Json(tree.universe().at(*verdict.x)) : Json(nullptr);
  }
  return j;
}

Json ToJson(const SubmodularityVerdict& verdict, const UtilityFunction& u) {
  Json j{{"pass", verdict.pass}, {"mode", verdict.mode}};
  if (!verdict.pass) {
    j["property"] = verdict.property;
    j["a"] = IdList(u.ground(), verdict.a);
    j["b"] = IdList(u.ground(), verdict.b);
    j["e"] = verdict.e ? Json(u.ground().at(*verdict.e)) : Json(nullptr);
  }
  return j;
}

Json ToJson(const ExperimentConfig& c) {
  Json j{{"trials", c.trials},
         {"num_macro", c.num_macro},
         {"universe_size", c.universe_size},
         {"num_groups", c.num_groups},
         {"cover_probability", c.cover_probability},
         {"weight_distribution", {{"kind", "uniform"}, {"lo", c.weight_lo}, {"hi", c.weight_hi}}},
         {"budget_range", {c.budget_range.lo, c.budget_range.hi}},
         {"seed", c.seed},
         {"bins", c.bins}};
  j["quota_range"] = c.quota_range
                         ? Json{c.quota_range->lo, c.quota_range->hi}
                         : Json("1..group_size");
  return j;
}

Json ToJson(const ExperimentReport& r, bool include_timing) {
  Json j{{"config", ToJson(r.config)},
         {"trials", r.trials},
         {"mean_ratio", r.mean},
         {"ci95", {r.ci_low, r.ci_high}},
         {"min_ratio", r.min},
         {"p5_ratio", r.p5},
         {"mass_in_095_100", r.mass_near_one},
         {"ratios_below_half", r.below_half},
         {"histogram", {{"edges", r.histogram.edges}, {"counts", r.histogram.counts}}}};
  if (include_timing && r.wall_clock_seconds) {
    j["wall_clock_seconds"] = *r.wall_clock_seconds;
  }
  return j;
}

Json ToJson(const Instance& instance) {
  const WeightedCoverage& u = *instance.utility;
  Json covers = Json::object();
  for (std::size_t e = 0; e < u.ground().size(); ++e) {
    covers[u.ground()[e]] = u.covers()[e];
  }
  return {{"seed", instance.seed},
          {"utility", {{"kind", "coverage"},
                       {"universe", u.universe_size()},
                       {"weights", u.weights()},
                       {"covers", covers}}},
          {"tree", ToJson(instance.tree)}};
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("IO_ERROR", "cannot read '" + path.string() + "'",
                          {path.string()});
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ValidationError("INVALID_JSON",
                          path.string() + ": " + e.what(), {path.string()});
  }
}

void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw ValidationError("IO_ERROR", "cannot write '" + path.string() + "'",
                            {path.string()});
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ValidationError("IO_ERROR", "cannot move into '" + path.string() + "'",
                          {path.string()});
  }
}

}  // namespace macrofacet
