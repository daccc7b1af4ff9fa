#include <gtest/gtest.h>

#include "cli_fixtures.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <json.hpp>

#include <cmath>

namespace hjg::cli {
namespace {

using test::parse_csv;
using test::run_cli;
using test::TempDir;
using test::two_node_file;
using nlohmann::json;

TEST(FormatNumber, SeventeenSignificantDigits) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Solve, SymmetricRowAtZero) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("entropic", 1, 1, 0, 0));
  const auto r = run_cli({"solve", in, "-o", dir.file("v.csv"), "--summary", dir.file("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = parse_csv(dir.read("v.csv"), &header);
  EXPECT_EQ(header, "t,V_1,V_2");
  ASSERT_EQ(rows.size(), 256u);
  EXPECT_EQ(rows[0][0], 0.0);
  EXPECT_NEAR(rows[0][1], 1.0, 1e-8);
  EXPECT_NEAR(rows[0][2], 1.0, 1e-8);
  const json summary = json::parse(dir.read("s.json"));
  EXPECT_NEAR(summary["value_at_0"][0].get<double>(), 1.0, 1e-8);
  EXPECT_LE(summary["max_residual"].get<double>(), 1e-8);
  EXPECT_GT(summary["steps"].get<int>(), 0);
}

TEST(Solve, SummaryDefaultsToStdoutWhenCsvGoesToFile) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("entropic", 1, 1, 0, 0));
  const auto r = run_cli({"solve", in, "-o", dir.file("v.csv")});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out).contains("value_at_0"));
  const auto piped = run_cli({"solve", in});
  EXPECT_EQ(piped.out.rfind("t,V_1,V_2\n", 0), 0u);
  EXPECT_TRUE(json::parse(piped.err).contains("max_residual"));
}

TEST(Solve, SelfLoopIsInputError) {
  TempDir dir;
  const auto in = dir.write("p.json", R"({"nodes":2,"edges":[
    {"from":1,"to":2,"family":"entropic","scale":1,"shift":0},
    {"from":2,"to":1,"family":"entropic","scale":1,"shift":0},
    {"from":1,"to":1,"family":"entropic","scale":1,"shift":0}],"terminal_payoff":[0,0],"horizon":1})");
  const auto r = run_cli({"solve", in});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("edge #3 (1 -> 1)"), std::string::npos) << r.err;
}

TEST(Solve, SyntaxErrorIsInputErrorWithPosition) {
  TempDir dir;
  const auto in = dir.write("p.json", "{\n \"nodes\": 2,\n \"edges\": [,]}");
  const auto r = run_cli({"solve", in});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST(Solve, MissingFileAndBadUsage) {
  EXPECT_EQ(run_cli({"solve", "/nonexistent/p.json"}).code, 2);
  EXPECT_EQ(run_cli({"solve"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Solve, SolverFailureExitsThree) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("entropic", 1, 1, 0, 800));
  const auto r = run_cli({"solve", in});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST(Solve, AsymmetricMatchesEulerDpOracle) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("entropic", 2, 1, 0, 1));
  const auto r = run_cli({"solve", in, "-o", dir.file("v.csv")});
  ASSERT_EQ(r.code, 0);
  const json summary = json::parse(r.out);
  const Problem p = to_problem(read_problem_file(in));
  const auto oracle = hjg::test::euler_dp_value(p, 100000);
  EXPECT_NEAR(summary["value_at_0"][0].get<double>(), oracle[0], 1e-4);
  EXPECT_NEAR(summary["value_at_0"][1].get<double>(), oracle[1], 1e-4);
}

TEST(Policy, SymmetricColumnsAreOne) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("entropic", 1, 1, 0, 0));
  const auto r = run_cli({"policy", in});
  ASSERT_EQ(r.code, 0);
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, "t,lambda_1_2,lambda_2_1");
  for (const auto& row : rows) {
    EXPECT_NEAR(row[1], 1.0, 1e-8);
    EXPECT_NEAR(row[2], 1.0, 1e-8);
  }
}

TEST(Policy, QuadraticClampsAtTerminalTime) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("quadratic", 1, 1, 0, -5));
  const auto r = run_cli({"policy", in});
  ASSERT_EQ(r.code, 0);
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows.back()[0], 1.0);
  EXPECT_EQ(rows.back()[1], 0.0);
  EXPECT_GT(rows.back()[2], 0.0);
}

TEST(Policy, AsymmetricInitialRowMatchesOracle) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("entropic", 2, 1, 0, 1));
  const auto r = run_cli({"policy", in});
  ASSERT_EQ(r.code, 0);
  const auto row = parse_csv(r.out).front();
  const Problem p = to_problem(read_problem_file(in));
  const auto v = hjg::test::euler_dp_value(p, 100000);
  EXPECT_NEAR(row[1], hjg::test::brent_maximizer(p.model.edge_cost(0), v[1] - v[0]), 1e-3);
  EXPECT_NEAR(row[2], hjg::test::brent_maximizer(p.model.edge_cost(1), v[0] - v[1]), 1e-3);
}

TEST(Ergodic, AsymmetricClosedForm) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("entropic", 4, 1, 0, 0));
  for (const char* method : {"both", "vanishing", "direct"}) {
    const auto r = run_cli({"ergodic", in, "--method", method});
    ASSERT_EQ(r.code, 0) << r.err;
    const json doc = json::parse(r.out);
    EXPECT_NEAR(doc["gamma"].get<double>(), 2.0, 1e-6) << method;
    EXPECT_EQ(doc["xi"][0].get<double>(), 0.0);
    EXPECT_NEAR(doc["xi"][1].get<double>(), -std::log(2.0), 1e-5);
    EXPECT_FALSE(doc["non_unique_corrector"].get<bool>());
    EXPECT_TRUE(doc.contains("diagnostics"));
  }
}

TEST(Ergodic, SymmetricRing) {
  TempDir dir;
  const auto in = dir.write("p.json", R"({"nodes":3,"edges":[
    {"from":1,"to":2,"family":"entropic","scale":1,"shift":0},
    {"from":2,"to":3,"family":"entropic","scale":1,"shift":0},
    {"from":3,"to":1,"family":"entropic","scale":1,"shift":0}],"terminal_payoff":[0,0,0],"horizon":1})");
  const auto r = run_cli({"ergodic", in});
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  EXPECT_NEAR(doc["gamma"].get<double>(), 1.0, 1e-8);
  for (const auto& x : doc["xi"]) EXPECT_NEAR(x.get<double>(), 0.0, 1e-8);
  EXPECT_NEAR(doc["q_infinity"].get<double>(), 0.0, 1e-8);
}

TEST(Ergodic, QuadraticWarnsAboutCorrector) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("quadratic", 1, 1, 0, 0, 1.0, 1.0));
  const auto r = run_cli({"ergodic", in, "--method", "both"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["non_unique_corrector"].get<bool>());
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Ergodic, RejectsUnknownMethod) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("entropic", 1, 1, 0, 0));
  EXPECT_EQ(run_cli({"ergodic", in, "--method", "magic"}).code, 2);
}

TEST(Ergodic, UnstabilizedDriftIsSolverFailure) {
  TempDir dir;
  ProblemFile f = parse_problem_file(two_node_file("entropic", 4, 1, 0, 5));
  f.solver.t_max = 10.0;
  f.edges[0].scale = 0.004;
  f.edges[1].scale = 0.001;
  const auto in = dir.write("p.json", serialize(f));
  EXPECT_EQ(run_cli({"ergodic", in, "--method", "direct"}).code, 3);
}

TEST(Simulate, SymmetricZeroVariance) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("entropic", 1, 1, 0, 0));
  const auto r = run_cli({"simulate", in, "--paths", "10000", "--seed", "42"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["z_score"].get<double>(), 0.0);
  EXPECT_EQ(doc["std_error"].get<double>(), 0.0);
  EXPECT_NEAR(doc["mean"].get<double>(), 1.0, 1e-9);
}

TEST(Simulate, RandomThreeNodeInstance) {
  TempDir dir;
  const auto gen = run_cli({"random", "--nodes", "3", "--seed", "5", "-o", dir.file("p.json")});
  ASSERT_EQ(gen.code, 0);
  const auto r = run_cli({"simulate", dir.file("p.json"), "--paths", "10000", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(std::abs(json::parse(r.out)["z_score"].get<double>()), 3.0);
}

TEST(Simulate, ZeroPathsIsUsageError) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("entropic", 1, 1, 0, 0));
  EXPECT_EQ(run_cli({"simulate", in, "--paths", "0"}).code, 2);
  EXPECT_EQ(run_cli({"simulate", in, "--start", "3"}).code, 2);
}

TEST(Asymptotics, SymmetricIsExact) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("entropic", 1, 1, 0, 0));
  const auto r = run_cli({"asymptotics", in, "--horizons", "10,20,40"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, "T,deviation");
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) EXPECT_LE(row[1], 1e-8);
}

TEST(Asymptotics, CorrectorAsTerminalPayoff) {
  TempDir dir;
  const double xi2 = -std::log(2.0);
  const auto in = dir.write("p.json", two_node_file("entropic", 4, 1, 0, xi2));
  const auto r = run_cli({"asymptotics", in});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : parse_csv(r.out)) EXPECT_LE(row[1], 1e-7);
}

TEST(Asymptotics, RandomFourNodeInstance) {
  TempDir dir;
  ASSERT_EQ(run_cli({"random", "--nodes", "4", "--seed", "7", "-o", dir.file("p.json")}).code, 0);
  const auto r = run_cli({"asymptotics", dir.file("p.json"), "--horizons", "10,20,40"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_LT(rows[2][1], 1e-4);
}

TEST(Asymptotics, BadHorizonList) {
  TempDir dir;
  const auto in = dir.write("p.json", two_node_file("entropic", 1, 1, 0, 0));
  EXPECT_EQ(run_cli({"asymptotics", in, "--horizons", "10,abc"}).code, 2);
  EXPECT_EQ(run_cli({"asymptotics", in, "--horizons", "-1"}).code, 2);
}

TEST(Validate, EntropicPassesQuadraticReportsStrictness) {
  TempDir dir;
  const auto ent = dir.write("e.json", two_node_file("entropic", 1, 2, 0, 0));
  const auto r = run_cli({"validate", ent});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["all_passed"].get<bool>());
  const auto quad = dir.write("q.json", two_node_file("quadratic", 1, 2, 0, 0));
  const auto q = run_cli({"validate", quad});
  ASSERT_EQ(q.code, 0);
  bool saw_strict = false;
  const json report = json::parse(q.out);
  for (const auto& c : report["checks"]) {
    if (c["name"] == "strict_monotonicity") {
      saw_strict = true;
      EXPECT_FALSE(c["passed"].get<bool>());
      EXPECT_FALSE(c["asserted"].get<bool>());
    }
  }
  EXPECT_TRUE(saw_strict);
}

TEST(Format, CanonicalOutputIsFixedPoint) {
  TempDir dir;
  const auto in = dir.write("p.json", R"({"horizon": 1, "terminal_payoff": [0, 1], "nodes": 2,
    "edges": [{"shift": 0, "scale": 1, "family": "entropic", "to": 2, "from": 1},
              {"from": 2, "to": 1, "family": "entropic", "scale": 3, "shift": 0.1}]})");
  const auto first = run_cli({"format", in, "-o", dir.file("a.json")});
  ASSERT_EQ(first.code, 0);
  const auto second = run_cli({"format", dir.file("a.json")});
  ASSERT_EQ(second.code, 0);
  EXPECT_EQ(second.out, dir.read("a.json"));
}

TEST(Random, DeterministicAndValid) {
  const auto a = run_cli({"random", "--nodes", "5", "--family", "mixed", "--seed", "9"});
  const auto b = run_cli({"random", "--nodes", "5", "--family", "mixed", "--seed", "9"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NO_THROW(to_problem(parse_problem_file(a.out)));
  EXPECT_NE(a.out, run_cli({"random", "--nodes", "5", "--family", "mixed", "--seed", "10"}).out);
}

TEST(Determinism, OutputsAreByteIdentical) {
  TempDir dir;
  ASSERT_EQ(run_cli({"random", "--nodes", "4", "--seed", "3", "-o", dir.file("p.json")}).code, 0);
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"solve", dir.file("p.json")}, {"policy", dir.file("p.json")},
        {"ergodic", dir.file("p.json")}, {"simulate", dir.file("p.json"), "--paths", "2000", "--seed", "8"},
        {"asymptotics", dir.file("p.json"), "--horizons", "5,10"}}) {
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    EXPECT_EQ(a.code, b.code) << args[0];
    EXPECT_EQ(a.out, b.out) << args[0];
    EXPECT_EQ(a.out.find('\r'), std::string::npos);
  }
}

}  // namespace
}  // namespace hjg::cli
