#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>

namespace imcons {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

/// maximize objective·x  subject to  G x <= g,  lower <= x <= upper.
/// Variables are free unless bounds are given (empty bound vectors mean none;
/// infinite entries are ignored).
struct LpProblem {
  VectorXd objective;
  MatrixXd G;
  VectorXd g;
  VectorXd lower;
  VectorXd upper;
};

enum class LpStatus { kOptimal, kUnbounded, kInfeasible };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  VectorXd x;
};

inline constexpr double kLpTolerance = 1e-9;

/// Dense two-phase tableau simplex with Bland's rule. Throws
/// Error(kIterationLimit) when the pivot cap is reached.
LpResult solve_lp(const LpProblem& p);

/// Euclidean projection of `center` onto the polygon {z : G z <= g}.
/// Throws Error(kInfeasible) if the polygon is empty.
Vector2d min_norm_point_2d(const Vector2d& center, const MatrixXd& G,
                           const VectorXd& g);

/// Unit vector v minimizing ‖Mv‖, returned only if ‖Mv‖ <= tol·‖M‖₂.
/// The sign is fixed so the largest-magnitude entry is positive.
std::optional<VectorXd> nullspace_vector(const MatrixXd& M, double tol);

/// State feedback K = -(R + BᵀPB)⁻¹BᵀPA from the fixed point of the
/// discrete Riccati recursion. Throws Error(kNoConvergence).
MatrixXd solve_dare(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Qw,
                    const MatrixXd& Rw, double tol = 1e-12,
                    int max_iter = 100000);

Eigen::VectorXcd eigenvalues(const MatrixXd& M);
double spectral_radius(const MatrixXd& M);
bool is_schur(const MatrixXd& M, double margin = 0.0);

/// All |λ| <= 1 + tol and every unit-modulus eigenvalue semisimple.
bool is_lyapunov_stable(const MatrixXd& M, double tol = 1e-9);

/// Algebraic multiplicity of λ among the eigenvalues of M (cluster tolerance
/// `tol`).
int eigenvalue_multiplicity(const MatrixXd& M, std::complex<double> lambda,
                            double tol = 1e-6);

/// Numerical rank of a complex matrix via SVD, threshold tol·max(1, σ_max).
int complex_rank(const Eigen::MatrixXcd& M, double tol = 1e-9);

}  // namespace imcons
