#include "imcons/simulator.hpp"

#include <gtest/gtest.h>

#include <cstring>

#include "imcons/error.hpp"
#include "imcons/scenario.hpp"

namespace imcons {
namespace {

// Bitwise equality, so NaN placeholders compare equal to themselves.
template <typename T>
bool same_bits(const T& a, const T& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

Scenario single_agent(const Vector2d& omega0) {
  Scenario sc;
  sc.name = "single";
  sc.ref = paper_reference();
  sc.schedule.graphs = {Digraph{1, {}}};
  sc.schedule.sequence = {0};
  const AgentModel m = paper_agents()[0];
  const RegulatorSolution sol = solve_regulator(m, sc.ref);
  sc.agents.push_back(make_agent("a", m, sc.ref, {}, sol.Pi * omega0, omega0));
  sc.horizon = 60;
  return sc;
}

GTEST_TEST(Run, SingleAgentOnManifold) {
  const Vector2d w0(3.0, 0.25);
  const Scenario sc = single_agent(w0);
  const SimTrace tr = run(sc);
  for (const StepRecord& s : tr.agents[0].steps) {
    EXPECT_EQ(s.mode, Mode::kGovernor);
    EXPECT_NEAR(s.u[0], 2 * 0.25, 1e-12);
    EXPECT_NEAR((s.y - s.y_ref).norm(), 0.0, 1e-9);
  }
  EXPECT_EQ(tr.agents[0].entry_step, 0);
}

GTEST_TEST(Run, FirstBuiltInScenario) {
  const Scenario sc = paper_scenario("paper-s1");
  const SimTrace tr = run(sc);
  const Metrics m = metrics(sc, tr);
  EXPECT_TRUE(m.passed);
  EXPECT_LE(m.final_z_spread, 1e-6);
  ASSERT_TRUE(m.consensus.has_value());
  EXPECT_TRUE(m.consensus_in_intersection);
  for (const AgentMetrics& a : m.agents) {
    EXPECT_EQ(a.violations, 0);
    ASSERT_TRUE(a.t_f.has_value());
    EXPECT_LT(*a.t_f, 500);
    EXPECT_LT(a.tracking_log_slope, 0.0);
    EXPECT_LT(a.state_log_slope, 0.0);
  }
  EXPECT_LE(m.final_alpha_spread, 1e-8);
}

GTEST_TEST(Run, SecondBuiltInScenarioZeroInputPrefix) {
  const Scenario sc = paper_scenario("paper-s2");
  const SimTrace tr = run(sc);
  const Metrics m = metrics(sc, tr);
  const AgentTrace& a3 = tr.agents[2];
  ASSERT_TRUE(a3.entry_step.has_value());
  EXPECT_GT(*a3.entry_step, 0);
  for (long t = 0; t < *a3.entry_step; ++t) {
    EXPECT_EQ(a3.steps[t].mode, Mode::kZeroInput);
    EXPECT_EQ(a3.steps[t].u[0], 0.0);
  }
  EXPECT_EQ(a3.steps[*a3.entry_step].mode, Mode::kGovernor);
  EXPECT_EQ(m.agents[2].zero_input_prefix, *a3.entry_step);
  EXPECT_TRUE(m.passed);
}

GTEST_TEST(Run, Deterministic) {
  const Scenario sc = paper_scenario("paper-s1");
  const SimTrace a = run(sc);
  const SimTrace b = run(sc);
  for (std::size_t i = 0; i < a.agents.size(); ++i) {
    for (std::size_t t = 0; t < a.agents[i].steps.size(); ++t) {
      EXPECT_TRUE(same_bits(a.agents[i].steps[t].x, b.agents[i].steps[t].x));
      EXPECT_TRUE(same_bits(a.agents[i].steps[t].u, b.agents[i].steps[t].u));
      EXPECT_TRUE(same_bits(a.agents[i].steps[t].alpha, b.agents[i].steps[t].alpha));
    }
  }
}

GTEST_TEST(Run, ShortHorizonReportsMissingEntry) {
  const Scenario sc = paper_scenario("paper-s2", {}, 3);
  const SimTrace tr = run(sc);
  EXPECT_FALSE(tr.agents[2].entry_step.has_value());
  ASSERT_EQ(tr.diagnostics.size(), 1u);
  EXPECT_NE(tr.diagnostics[0].find("agent3"), std::string::npos);
}

GTEST_TEST(Run, DisjointIntervalsFlagA10) {
  Scenario sc = paper_scenario("paper-s1", {}, 50);
  sc.agents[0].set.w2_bounds = {0.2, 0.3};
  sc.agents[1].set.w2_bounds = {-0.3, -0.2};
  try {
    run(sc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAssumptionFailure);
  }
  const auto problems = validate_scenario(sc);
  ASSERT_FALSE(problems.empty());
  EXPECT_NE(problems.back().find("A10"), std::string::npos);
}

GTEST_TEST(Run, NodeCountMismatch) {
  Scenario sc = paper_scenario("paper-s1", {}, 10);
  sc.agents.pop_back();
  EXPECT_FALSE(validate_scenario(sc).empty());
  EXPECT_THROW(run(sc, {false}), Error);
}

GTEST_TEST(Run, RandomizedScenariosNeverViolate) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Scenario sc = perturbed_paper_scenario(seed);
    EXPECT_TRUE(validate_scenario(sc).empty()) << seed;
    const SimTrace tr = run(sc);
    const Metrics m = metrics(sc, tr);
    for (const AgentMetrics& a : m.agents) {
      EXPECT_EQ(a.violations, 0) << "seed " << seed;
    }
  }
}

GTEST_TEST(Metrics, PerfectConsensusHasZeroSpread) {
  const Scenario sc = single_agent(Vector2d(1.0, 0.1));
  const Metrics m = metrics(sc, run(sc));
  EXPECT_EQ(m.final_z_spread, 0.0);
}

GTEST_TEST(PaperScenario, UnknownNameThrows) {
  try {
    paper_scenario("paper-s3");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

GTEST_TEST(PaperScenario, PerturbedIsDeterministicAndInsideXinf) {
  const Scenario a = perturbed_paper_scenario(77);
  const Scenario b = perturbed_paper_scenario(77);
  for (std::size_t i = 0; i < a.agents.size(); ++i) {
    EXPECT_EQ(a.agents[i].x0, b.agents[i].x0);
    EXPECT_EQ(a.agents[i].omega0, b.agents[i].omega0);
  }
  EXPECT_NE(perturbed_paper_scenario(78).agents[0].x0, a.agents[0].x0);
}

}  // namespace
}  // namespace imcons
