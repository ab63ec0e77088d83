#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imcons/simulator.hpp"

namespace imcons {

/// Sampling period of the built-in four-agent example.
inline constexpr double kPaperStep = 0.37;

/// The four built-in agents (ZOH-discretized third-order plants, |u| <= 1,
/// with their published state-feedback gains).
std::vector<AgentModel> paper_agents();

/// Four-node ring switched cyclically, one edge of weight 0.4 per step.
GraphSchedule paper_schedule();

ReferenceModel paper_reference();

struct PaperInitialConditions {
  std::vector<VectorXd> x0;
  std::vector<Vector2d> omega0;
};

/// variant 1: every agent starts inside X∞; variant 2: agent 3 does not.
PaperInitialConditions paper_initial_conditions(int variant);

/// Builds "paper-s1" or "paper-s2". Throws kConfig on other names.
Scenario paper_scenario(const std::string& name, const McaiOptions& opts = {},
                        long horizon = 500);

/// paper-s1 with initial states resampled inside X∞ (rejection against the
/// X∞ witness test), random ω(0), and random edge weights in (ā, 0.9].
/// Deterministic for a given seed.
Scenario perturbed_paper_scenario(std::uint64_t seed,
                                  const McaiOptions& opts = {},
                                  long horizon = 500);

}  // namespace imcons
