#pragma once

#include <optional>
#include <string>
#include <vector>

#include "imcons/numerics.hpp"
#include "imcons/polytope.hpp"

namespace imcons {

/// One agent: x⁺ = A x + B u, y = C x, u ∈ U.
struct AgentModel {
  MatrixXd A;
  MatrixXd B;
  MatrixXd C;
  HPolytope U;
  /// Explicit state feedback; synthesized by DARE with identity weights when
  /// absent.
  std::optional<MatrixXd> K;

  Eigen::Index states() const { return A.rows(); }
  Eigen::Index inputs() const { return B.cols(); }
  Eigen::Index outputs() const { return C.rows(); }

  /// Throws kDimensionMismatch on inconsistent shapes.
  void validate() const;
};

/// Ramp reference ω⁺ = S ω with S = [[1, h], [0, 1]], y_r = Q ω.
struct ReferenceModel {
  double h = 1.0;
  MatrixXd Q;  // q × 2

  /// The 2×2 Jordan block, built from h on demand.
  Eigen::Matrix2d S() const;
};

struct RegulatorSolution {
  MatrixXd Pi;     // n × 2
  MatrixXd Gamma;  // p × 2, first column exactly zero
  MatrixXd L;      // p × 2, Gamma - K Pi
  MatrixXd K;      // p × n
  VectorXd xi;     // unit eigenvector of A for eigenvalue 1
  double gamma = 0.0;

  VectorXd pi1() const { return Pi.col(0); }
  VectorXd pi2() const { return Pi.col(1); }
  VectorXd gamma2() const { return Gamma.col(1); }
};

struct AssumptionCheck {
  std::string id;  // "A2-stabilizable", "A7", ...
  bool passed = false;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;

  bool all_passed() const;
  const AssumptionCheck* find(const std::string& id) const;
};

AssumptionReport check_assumptions(const AgentModel& agent,
                                   const ReferenceModel& ref);

/// Regulator equations A Π − Π S = −B Γ, C Π = Q with Γ¹ = 0.
///
/// Π¹ is the eigenvector of A for eigenvalue 1 scaled to C Π¹ = Q¹; the second
/// column comes from the square-or-wide system
/// [[A − I, B], [C, 0]] [Π²; Γ²] = [h Π¹; Q²], solved in least squares.
RegulatorSolution solve_regulator(const AgentModel& agent,
                                  const ReferenceModel& ref);

/// For q > 1: an output map whose first column is C ξ, which makes Γ¹ = 0
/// attainable. `q2` is the (free) second column.
MatrixXd compatible_output_map(const AgentModel& agent, const VectorXd& q2);

/// u = K x + L ω.
VectorXd control_law(const RegulatorSolution& sol, const VectorXd& x,
                     const Vector2d& omega);

/// ‖A Π − Π S + B Γ‖∞ and ‖C Π − Q‖∞.
std::pair<double, double> regulator_residuals(const AgentModel& agent,
                                              const ReferenceModel& ref,
                                              const MatrixXd& Pi,
                                              const MatrixXd& Gamma);

}  // namespace imcons
