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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "macrofacet/json_io.h"

namespace macrofacet {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = MACROFACET_FIXTURE_DIR;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "macrofacet");
  std::ostringstream out, err;
  int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("macrofacet_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string Fixture(const std::string& name) { return (kFixtures / name).string(); }
  std::string Path(const std::string& name) { return (dir_ / name).string(); }

  // Compiles `<name>_chronicle.json` and returns the output path.
  std::string Compiled(const std::string& name) {
    CliRun r = Cli({"compile", "--in", Fixture(name + "_chronicle.json"), "--out",
                 Path(name + ".json"), "--quiet"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return Path(name + ".json");
  }

  static Json Diagnostic(const std::string& err) {
    return Json::parse(err.substr(0, err.find('\n')));
  }

  fs::path dir_;
};

TEST_F(CliTest, CompilePrintsSummary) {
  CliRun r = Cli({"compile", "--in", Fixture("networking_chronicle.json"), "--out", Path("m.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "macro-facets: 5\nmax closure size: 3\ntotal cost: 10\n");
  Json m = ReadJsonFile(Path("m.json"));
  EXPECT_EQ(m["macro_facets"].size(), 5u);
}

TEST_F(CliTest, CompileToStdout) {
  CliRun r = Cli({"compile", "--in", Fixture("writing_style_chronicle.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(Json::parse(r.out)["macro_facets"].size(), 5u);
}

TEST_F(CliTest, CompileEmptyChronicle) {
  std::ofstream(Path("empty.json")) << R"({"facets": [], "edges": []})";
  CliRun r = Cli({"compile", "--in", Path("empty.json"), "--out", Path("out.json"), "--quiet"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(ReadJsonFile(Path("out.json"))["macro_facets"].empty());
}

TEST_F(CliTest, CompileDanglingEdge) {
  std::ofstream(Path("bad.json")) << R"({"facets": [{"id": "a"}], "edges": [["a", "b"]]})";
  CliRun r = Cli({"compile", "--in", Path("bad.json")});
  EXPECT_EQ(r.code, kExitValidation);
  Json d = Diagnostic(r.err);
  EXPECT_EQ(d["code"], "UNKNOWN_FACET");
  EXPECT_EQ(d["witness"], Json::array({"b"}));
  EXPECT_EQ(d["severity"], "error");
}

TEST_F(CliTest, CompileSchemaErrorHasJsonPath) {
  std::ofstream(Path("bad.json")) << R"({"facets": [{"id": 1}]})";
  CliRun r = Cli({"compile", "--in", Path("bad.json")});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_EQ(Diagnostic(r.err)["witness"], Json::array({"$.facets[0].id"}));
}

TEST_F(CliTest, CompileWarnsOnZeroCost) {
  std::ofstream(Path("z.json")) << R"({"facets": [{"id": "a", "cost": 0}]})";
  CliRun r = Cli({"compile", "--in", Path("z.json"), "--out", Path("o.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(Diagnostic(r.err)["code"], "ZERO_COST_FACET");
  EXPECT_EQ(Diagnostic(r.err)["severity"], "warning");
}

TEST_F(CliTest, MissingFileIsAValidationFailure) {
  CliRun r = Cli({"compile", "--in", Path("nope.json")});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_EQ(Diagnostic(r.err)["code"], "IO_ERROR");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Cli({}).code, kExitValidation);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitValidation);
  EXPECT_EQ(Cli({"compile"}).code, kExitValidation);
  EXPECT_EQ(Cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, VerifyWritingStyleExamplePasses) {
  CliRun r = Cli({"verify", "--in", Compiled("writing_style"), "--constraints",
               Fixture("writing_style_constraints.json"), "--utility", Fixture("writing_style_utility.json")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["laminarity"]["pass"], true);
  EXPECT_EQ(j["matroid_axioms"]["pass"], true);
}

TEST_F(CliTest, VerifyOverlappingConstraintsFails) {
  CliRun r = Cli({"verify", "--in", Compiled("networking"), "--constraints",
               Fixture("networking_constraints_overlapping.json")});
  EXPECT_EQ(r.code, kExitValidation);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["pass"], false);
  EXPECT_EQ(j["laminarity"]["witness"], Json::array({"A2", "A3"}));
  EXPECT_EQ(Diagnostic(r.err)["code"], "LAMINARITY_VIOLATION");
}

TEST_F(CliTest, VerifySquareUtilityFindsCounterexample) {
  CliRun r = Cli({"verify", "--in", Compiled("square"), "--constraints",
               Fixture("square_constraints.json"), "--utility",
               Fixture("square_utility.json")});
  EXPECT_EQ(r.code, kExitValidation);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["utility"]["pass"], false);
  EXPECT_EQ(j["utility"]["property"], "submodularity");
  Json d = Diagnostic(r.err);
  EXPECT_EQ(d["code"], "SUBMODULARITY_VIOLATION");
  EXPECT_EQ(d["witness"].size(), 3u);
}

TEST_F(CliTest, SelectWritingStyleEndToEnd) {
  CliRun r = Cli({"select", "--in", Compiled("writing_style"), "--constraints",
               Fixture("writing_style_constraints.json"), "--utility", Fixture("writing_style_utility.json"),
               "--trace"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["chosen"], Json::array({"scc:m4", "scc:m1", "scc:m5"}));
  EXPECT_EQ(j["trace"]["stop_reason"], "candidates-exhausted");
  EXPECT_EQ(j["trace"]["iterations"][2]["violated_node"], "A1");
  EXPECT_EQ(j["trace"]["iterations"].size(), 5u);
}

TEST_F(CliTest, SelectLazyAndOptimal) {
  std::string m = Compiled("networking");
  CliRun lazy = Cli({"select", "--algo", "lazy", "--in", m, "--constraints",
                  Fixture("networking_constraints.json"), "--utility", Fixture("networking_utility.json")});
  ASSERT_EQ(lazy.code, kExitOk) << lazy.err;
  EXPECT_EQ(Json::parse(lazy.out)["chosen"], Json::array({"scc:f1", "scc:f3", "scc:f5"}));

  // Brute force needs every set's value; the partial script cannot answer.
  CliRun opt = Cli({"optimal", "--in", m, "--constraints", Fixture("networking_constraints.json"),
                 "--utility", Fixture("networking_utility.json")});
  EXPECT_EQ(opt.code, kExitValidation);
  EXPECT_EQ(Diagnostic(opt.err)["code"], "UNSCRIPTED_QUERY");
}

TEST_F(CliTest, CompareOnFourteenMacroFacets) {
  CliRun r = Cli({"select", "--compare", "--in", Compiled("coverage14"), "--constraints",
               Fixture("coverage14_constraints.json"), "--utility",
               Fixture("coverage14_utility.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json j = Json::parse(r.out);
  double ratio = j["ratio"];
  EXPECT_GE(ratio, 0.5);
  EXPECT_LE(ratio, 1.0 + 1e-9);
  EXPECT_LE(j["greedy"]["value"].get<double>(), j["optimal"]["value"].get<double>() + 1e-9);
}

TEST_F(CliTest, OptimalTooLargeIsALimitError) {
  std::string facets;
  for (int i = 0; i < 21; ++i) {
    facets += std::string(i ? "," : "") + "{\"id\":\"x" + std::to_string(100 + i) + "\"}";
  }
  std::ofstream(Path("big.json")) << "{\"facets\":[" << facets << "]}";
  std::ofstream(Path("c.json")) << "{}";
  std::string weights;
  for (int i = 0; i < 21; ++i) {
    weights += std::string(i ? "," : "") + "\"x" + std::to_string(100 + i) + "\":1";
  }
  std::ofstream(Path("u.json")) << "{\"kind\":\"modular\",\"weights\":{" << weights << "}}";
  CliRun c = Cli({"compile", "--in", Path("big.json"), "--out", Path("bigm.json"), "--quiet"});
  ASSERT_EQ(c.code, kExitOk);
  CliRun r = Cli({"optimal", "--in", Path("bigm.json"), "--constraints", Path("c.json"),
               "--utility", Path("u.json")});
  EXPECT_EQ(r.code, kExitLimit);
  EXPECT_EQ(Diagnostic(r.err)["code"], "UNIVERSE_TOO_LARGE");
}

TEST_F(CliTest, SimulateIsByteIdenticalAcrossRuns) {
  for (const char* d : {"a", "b"}) {
    CliRun r = Cli({"simulate", "--trials", "40", "--seed", "9", "--out-dir", Path(d),
                 "--quiet"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  for (const char* f : {"trials.csv", "histogram.csv", "report.json"}) {
    EXPECT_EQ(Slurp(dir_ / "a" / f), Slurp(dir_ / "b" / f)) << f;
    EXPECT_FALSE(Slurp(dir_ / "a" / f).empty());
  }
  Json report = ReadJsonFile(Path("a/report.json"));
  EXPECT_FALSE(report.contains("wall_clock_seconds"));
  EXPECT_EQ(report["trials"], 40);
}

TEST_F(CliTest, SimulateTimingIsOptIn) {
  CliRun r = Cli({"simulate", "--trials", "5", "--out-dir", Path("t"), "--timing", "--quiet"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_TRUE(ReadJsonFile(Path("t/report.json")).contains("wall_clock_seconds"));
}

TEST_F(CliTest, SimulateRejectsBadConfig) {
  CliRun r = Cli({"simulate", "--groups", "20", "--out-dir", Path("x")});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_EQ(Diagnostic(r.err)["code"], "INVALID_CONFIG");
}

TEST_F(CliTest, CompiledOutputRoundTrips) {
  std::string m = Compiled("networking");
  Json j = ReadJsonFile(m);
  EXPECT_EQ(Dump(ToJson(ParseMacroFacetSet(j))), Slurp(m));
}

}  // namespace
}  // namespace macrofacet
