#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imcons/governor.hpp"
#include "imcons/mcai.hpp"
#include "imcons/network.hpp"
#include "imcons/regulator.hpp"

namespace imcons {

struct AgentSetup {
  std::string name;
  AgentModel model;
  RegulatorSolution sol;
  McaiSet set;
  VectorXd x0;
  Vector2d omega0 = Vector2d::Zero();
};

/// Solves the regulator and the invariant set for one agent.
AgentSetup make_agent(std::string name, AgentModel model,
                      const ReferenceModel& ref, const McaiOptions& opts,
                      VectorXd x0, Vector2d omega0);

struct SimTolerances {
  double constraint = 1e-9;  // allowed overshoot of G_U u <= g
  double settle = 1e-12;     // α unchanged and equal to r0, ∞-norm
  int settle_steps = 20;
  double spread = 1e-6;      // z-frame consensus threshold
  /// Tracking errors below noise_floor·max(1, ‖reference‖) are roundoff.
  double noise_floor = 1e-10;
  long tail_window = 100;    // steps in the decay fit
};

struct Scenario {
  std::string name;
  std::vector<AgentSetup> agents;
  ReferenceModel ref;
  GraphSchedule schedule;
  long horizon = 500;
  SimTolerances tol;
  std::uint64_t seed = 0;
};

enum class Mode { kZeroInput, kGovernor };

struct StepRecord {
  long t = 0;
  VectorXd x;
  VectorXd u;
  VectorXd y;
  VectorXd y_ref;
  Vector2d omega = Vector2d::Zero();
  Vector2d r0 = Vector2d::Zero();  // S^{-t} ω(t)
  Vector2d alpha = Vector2d::Zero();
  double mu = 0.0;
  double phi = 0.0;
  bool gate = false;
  Mode mode = Mode::kZeroInput;
};

struct AgentTrace {
  std::string name;
  std::vector<StepRecord> steps;
  std::optional<long> entry_step;  // first step run by the governor
};

struct SimTrace {
  std::string scenario;
  double h = 0.0;
  std::vector<AgentTrace> agents;
  std::vector<Vector2d> final_omega;  // ω(horizon)
  std::vector<Interval> intervals;    // W_ε per agent
  std::vector<std::string> diagnostics;
};

struct RunOptions {
  /// When false, A1/A10 failures are reported as diagnostics and the run
  /// proceeds.
  bool enforce_assumptions = true;
};

/// Pre-run checks: schedule validity, A1 and A10. Returns failure messages.
std::vector<std::string> validate_scenario(const Scenario& sc);

/// Governor and zero-input phases per agent, then the projected consensus
/// exchange, every step. Throws kAssumptionFailure, kConstraintViolation or
/// kInvariantBroken.
SimTrace run(const Scenario& sc, const RunOptions& opts = {});

struct AgentMetrics {
  double max_constraint_margin = 0.0;  // max over t of max(G_U u − g)
  long violations = 0;
  std::optional<long> t_f;
  std::optional<long> entry_step;
  long zero_input_prefix = 0;
  /// Least-squares slope of log‖y(t) − Q S^t ω̄⁰‖ over the tail: the last
  /// tail_window steps (not before entry) ending where the error first drops
  /// under the noise floor.
  double tracking_log_slope = 0.0;
  double state_log_slope = 0.0;  // same window, ‖x(t) − Π S^t ω̄⁰‖
  long tail_start = 0;
  long tail_points = 0;
  /// max over t >= t_f of ‖y(t) − Q S^t ω̄⁰‖ / max(1, ‖S^t ω̄⁰‖).
  double post_settle_error = 0.0;
};

struct Metrics {
  std::vector<AgentMetrics> agents;
  double final_z_spread = 0.0;
  std::optional<long> spread_settled_step;  // spread <= tol from here on
  std::optional<Vector2d> consensus;        // ω̄⁰ (time-0 frame)
  bool consensus_in_intersection = false;
  bool a10_ok = false;
  double final_alpha_spread = 0.0;
  bool passed = false;
};

Metrics metrics(const Scenario& sc, const SimTrace& trace);

}  // namespace imcons
