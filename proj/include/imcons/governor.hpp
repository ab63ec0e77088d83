#pragma once

#include <optional>

#include "imcons/mcai.hpp"
#include "imcons/regulator.hpp"

namespace imcons {

/// Largest input-constraint excess treated as roundoff and pulled back into U.
inline constexpr double kInputRoundoff = 1e-9;

/// S^t = [[1, h t], [0, 1]] in closed form; negative t gives the inverse.
Eigen::Matrix2d s_power(double h, long t);

/// Projection of r0 onto {α : Hₓ x0 + H_w S^{t0} α <= 1, α² ∈ W_ε}.
/// Throws kInfeasible when x0 ∉ X∞.
Vector2d init_alpha(const McaiSet& set, double h, const VectorXd& x0,
                    const Vector2d& r0, long t0);

/// Largest φ ∈ [0, 1] with Hₓ x_t + H_w S^t (α_prev + φ (r0 − α_prev)) <= 1.
/// Each row is affine in φ, so the LP reduces to a minimum of ratios.
/// Throws kInvariantBroken if φ = 0 is infeasible beyond 1e-9.
double solve_phi(const McaiSet& set, double h, const VectorXd& x_t,
                 const Vector2d& r0, const Vector2d& alpha_prev, long t);

struct GovernorStep {
  long t = 0;
  Vector2d alpha = Vector2d::Zero();
  VectorXd u;
  double mu = 0.0;
  /// NaN when the gate failed or at the activation step.
  double phi = 0.0;
  bool gate = false;
};

/// Reference governor with IMP control for one agent. α is kept in the
/// time-0 frame, so the live reference is S^t α.
class Governor {
 public:
  Governor(const AgentModel& agent, const RegulatorSolution& sol,
           const McaiSet& set, double h);

  bool active() const { return active_; }
  long activation_time() const { return t0_; }
  const Vector2d& alpha() const { return alpha_; }

  /// Initializes α at time t0 from state x0 and target r0 (time-0 frame).
  void activate(const VectorXd& x0, const Vector2d& r0, long t0);

  /// One step at time t with measured x_t and target r0. At the activation
  /// time itself μ = 0 and only the initial α acts. Throws kNotInitialized.
  GovernorStep step(const VectorXd& x_t, const Vector2d& r0, long t);

 private:
  MatrixXd K_;
  MatrixXd L_;
  MatrixXd Pi_;
  MatrixXd AK_;
  HPolytope U_;
  McaiSet set_;
  double h_;
  bool active_ = false;
  long t0_ = 0;
  Vector2d alpha_ = Vector2d::Zero();
  std::optional<VectorXd> x_prev_;
  long t_prev_ = 0;
};

}  // namespace imcons
