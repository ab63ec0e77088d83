#pragma once

#include <optional>
#include <string>
#include <utility>

#include "imcons/polytope.hpp"
#include "imcons/regulator.hpp"

namespace imcons {

struct McaiOptions {
  double epsilon = 0.01;  // steady-state row truncation
  double delta = 0.005;   // governor gate tightening, 0 < delta < epsilon
  int max_horizon = 1000;
};

/// Maximal constraint-admissible invariant set of the closed loop, in the
/// stable coordinates (x̃, ω²) with x̃ = x − Π ω, and lifted back to (x, ω).
///
///   tilde:  H̃ₓ x̃ + H̃_w ω² <= 1
///   lifted: Hₓ x + H_w ω <= 1,  Hₓ = H̃ₓ,  H_w = [−H̃ₓ Π¹, H̃_w − H̃ₓ Π²]
struct McaiSet {
  HPolytope tilde;  // dimension n + 1, rhs all ones
  MatrixXd Hx;      // ℓ × n
  MatrixXd Hw;      // ℓ × 2
  MatrixXd Pi;      // n × 2
  double epsilon = 0.0;
  double delta = 0.0;
  int t_star = 0;
  /// ω² interval of the computed (ε-tightened) set.
  std::pair<double, double> w2_bounds{0.0, 0.0};
  /// ω² interval before truncation: {ω² : G_U Γ² ω² <= 1}.
  std::pair<double, double> w2_bounds_untightened{0.0, 0.0};

  Eigen::Index states() const { return Hx.cols(); }
  Eigen::Index rows() const { return Hx.rows(); }
};

/// Constraint accumulation for x̃⁺ = (A + B K) x̃, ω²⁺ = ω² with output
/// u = K x̃ + Γ² ω² ∈ U, plus the truncated steady-state rows
/// G_U Γ² ω² <= 1 − ε. Stops at the first horizon whose new rows are all
/// redundant, then prunes redundant rows.
///
/// Throws kHorizonExceeded or kEmptyInterior.
McaiSet compute_mcai(const AgentModel& agent, const RegulatorSolution& sol,
                     const McaiOptions& opts = {});

/// Raw (unpruned) constraint rows for horizons 0..k_max in (x̃, ω²), plus the
/// truncated steady-state rows, rhs normalized to 1.
HPolytope mcai_raw_constraints(const AgentModel& agent,
                               const RegulatorSolution& sol, double epsilon,
                               int k_max);

/// Membership of (x̃, ω²) in Õ∞, or with use_delta in the gate set Õ∞^δ:
/// every row of the untruncated set at most 1 − δ. Since δ < ε, any ω² in
/// W_ε with x̃ = 0 passes the gate.
bool in_tilde_delta(const McaiSet& set, const VectorXd& x_tilde, double w2,
                    bool use_delta);

bool in_O_inf(const McaiSet& set, const VectorXd& x, const Vector2d& omega);

/// A witness ω with (x, ω) ∈ O∞, the one closest to `center`; nullopt when
/// x ∉ X∞.
std::optional<Vector2d> x_in_Xinf(const McaiSet& set, const VectorXd& x,
                                  const Vector2d& center = Vector2d::Zero());

/// ω² interval W_ε used by the governor and the consensus projection.
/// Throws kEmptyInterval if it is empty.
std::pair<double, double> w_eps_interval(const McaiSet& set);

/// Line-oriented text form; see docs in the README.
std::string to_text(const McaiSet& set);
McaiSet mcai_from_text(const std::string& text);

}  // namespace imcons
