#include "imcons/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "imcons/error.hpp"
#include "imcons/scenario.hpp"

namespace imcons {
namespace {

LpProblem box_problem(const VectorXd& c, double lo, double hi) {
  const Eigen::Index n = c.size();
  LpProblem p;
  p.objective = c;
  p.G.resize(2 * n, n);
  p.G << MatrixXd::Identity(n, n), -MatrixXd::Identity(n, n);
  p.g.resize(2 * n);
  p.g << VectorXd::Constant(n, hi), VectorXd::Constant(n, -lo);
  return p;
}

GTEST_TEST(SolveLp, OneDimensionalBox) {
  LpProblem p;
  p.objective = VectorXd::Ones(1);
  p.G.resize(2, 1);
  p.G << 1, -1;
  p.g = VectorXd::Zero(2);
  p.g[0] = 1;
  const LpResult r = solve_lp(p);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_NEAR(r.x[0], 1.0, 1e-12);
}

GTEST_TEST(SolveLp, BoxCorner) {
  const LpResult r = solve_lp(box_problem(Eigen::Vector2d(1, 1), 0, 1));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  EXPECT_NEAR(r.x[0], 1.0, 1e-12);
  EXPECT_NEAR(r.x[1], 1.0, 1e-12);
}

GTEST_TEST(SolveLp, Unbounded) {
  LpProblem p;
  p.objective = VectorXd::Ones(1);
  p.G.resize(1, 1);
  p.G << -1;
  p.g = VectorXd::Zero(1);
  EXPECT_EQ(solve_lp(p).status, LpStatus::kUnbounded);
}

GTEST_TEST(SolveLp, Infeasible) {
  LpProblem p;
  p.objective = VectorXd::Ones(1);
  p.G.resize(2, 1);
  p.G << 1, -1;
  p.g.resize(2);
  p.g << -1, -1;  // x <= -1 and x >= 1
  EXPECT_EQ(solve_lp(p).status, LpStatus::kInfeasible);
}

GTEST_TEST(SolveLp, VariableBounds) {
  LpProblem p;
  p.objective = Eigen::Vector2d(1, -1);
  p.G = MatrixXd::Zero(0, 2);
  p.g = VectorXd::Zero(0);
  p.lower = Eigen::Vector2d(-2, -3);
  p.upper = Eigen::Vector2d(5, 4);
  const LpResult r = solve_lp(p);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 8.0, 1e-12);
}

// Degenerate problem: many rows through the same vertex.
GTEST_TEST(SolveLp, DegenerateVertex) {
  const int m = 30;
  LpProblem p;
  p.objective = Eigen::Vector2d(1, 1);
  p.G.resize(m, 2);
  p.g.resize(m);
  for (int k = 0; k < m; ++k) {
    const double th = 0.05 + 1.4 * k / (m - 1);
    p.G.row(k) << std::cos(th), std::sin(th);
    p.g[k] = std::cos(th) + std::sin(th);  // all pass through (1, 1)
  }
  const LpResult r = solve_lp(p);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

// Random feasible bounded LPs: optimum is feasible and no sampled feasible
// point beats it.
GTEST_TEST(SolveLp, RandomProblemsAgainstSampling) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;
    const int m = 3 * n + trial % 7;
    LpProblem p;
    p.objective = VectorXd::NullaryExpr(n, [&] { return nd(rng); });
    p.G = MatrixXd::NullaryExpr(m, n, [&] { return nd(rng); });
    p.g = VectorXd::Ones(m) + 0.5 * VectorXd::NullaryExpr(m, [&] {
      return std::abs(nd(rng));
    });
    p.lower = VectorXd::Constant(n, -3.0);
    p.upper = VectorXd::Constant(n, 3.0);
    const LpResult r = solve_lp(p);
    ASSERT_EQ(r.status, LpStatus::kOptimal);
    EXPECT_LE(((p.G * r.x - p.g).array()).maxCoeff(), 1e-8);
    EXPECT_LE((r.x.array().abs()).maxCoeff(), 3.0 + 1e-8);
    EXPECT_NEAR(p.objective.dot(r.x), r.value, 1e-9);
    std::uniform_real_distribution<double> ud(-3.0, 3.0);
    for (int s = 0; s < 2000; ++s) {
      const VectorXd x = VectorXd::NullaryExpr(n, [&] { return ud(rng); });
      if (((p.G * x - p.g).array() <= 0.0).all()) {
        EXPECT_LE(p.objective.dot(x), r.value + 1e-9);
      }
    }
  }
}

GTEST_TEST(SolveLp, Deterministic) {
  const LpProblem p = box_problem(Eigen::Vector3d(1, 2, 3), -1, 2);
  const LpResult a = solve_lp(p);
  const LpResult b = solve_lp(p);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.x, b.x);
}

MatrixXd unit_box_rows() {
  MatrixXd G(4, 2);
  G << 1, 0, -1, 0, 0, 1, 0, -1;
  return G;
}

GTEST_TEST(MinNormPoint2d, FacetProjection) {
  MatrixXd G(1, 2);
  G << -1, 0;
  const Vector2d z = min_norm_point_2d(Vector2d::Zero(), G, -VectorXd::Ones(1));
  EXPECT_NEAR(z[0], 1.0, 1e-14);
  EXPECT_NEAR(z[1], 0.0, 1e-14);
}

GTEST_TEST(MinNormPoint2d, FeasibleCenter) {
  const Vector2d c(0.3, -0.2);
  EXPECT_EQ(min_norm_point_2d(c, unit_box_rows(), VectorXd::Ones(4)), c);
}

GTEST_TEST(MinNormPoint2d, Vertex) {
  const Vector2d z =
      min_norm_point_2d(Vector2d(2, 2), unit_box_rows(), VectorXd::Ones(4));
  EXPECT_NEAR(z[0], 1.0, 1e-14);
  EXPECT_NEAR(z[1], 1.0, 1e-14);
}

GTEST_TEST(MinNormPoint2d, Empty) {
  MatrixXd G(2, 2);
  G << 1, 0, -1, 0;
  try {
    min_norm_point_2d(Vector2d::Zero(), G, Eigen::Vector2d(-1, -1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  }
}

// Optimality against sampled feasible points on random polygons
// (20 polygons × 500 samples).
GTEST_TEST(MinNormPoint2d, NoSampleIsCloser) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(-4.0, 4.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 3 + trial % 6;
    MatrixXd G(m, 2);
    VectorXd g(m);
    const Vector2d interior(ud(rng) / 2, ud(rng) / 2);
    for (int k = 0; k < m; ++k) {
      G.row(k) = Eigen::RowVector2d(nd(rng), nd(rng));
      g[k] = G.row(k).dot(interior) + 0.2 + std::abs(nd(rng));
    }
    const Vector2d c(3 * ud(rng), 3 * ud(rng));
    const Vector2d z = min_norm_point_2d(c, G, g);
    ASSERT_LE((G * z - g).maxCoeff(), 1e-9);
    int checked = 0;
    for (int s = 0; s < 100000 && checked < 500; ++s) {
      const Vector2d p(ud(rng), ud(rng));
      if (((G * p - g).array() <= 0.0).all()) {
        ++checked;
        EXPECT_LE((z - c).norm(), (p - c).norm() + 1e-9);
      }
    }
  }
}

GTEST_TEST(NullspaceVector, ZeroMatrix) {
  const auto v = nullspace_vector(MatrixXd::Zero(2, 2), 1e-10);
  ASSERT_TRUE(v.has_value());
  EXPECT_NEAR(v->norm(), 1.0, 1e-14);
}

GTEST_TEST(NullspaceVector, FirstBuiltInAgent) {
  const AgentModel a = paper_agents()[0];
  const MatrixXd M = a.A - MatrixXd::Identity(3, 3);
  const auto v = nullspace_vector(M, 1e-8);
  ASSERT_TRUE(v.has_value());
  EXPECT_NEAR((*v)[0], 1.0, 1e-12);
  EXPECT_NEAR((*v)[1], 0.0, 1e-12);
  EXPECT_NEAR((*v)[2], 0.0, 1e-12);
}

GTEST_TEST(NullspaceVector, AllBuiltInAgents) {
  for (const AgentModel& a : paper_agents()) {
    const MatrixXd M = a.A - MatrixXd::Identity(3, 3);
    const auto v = nullspace_vector(M, 1e-8);
    ASSERT_TRUE(v.has_value());
    EXPECT_LE((M * *v).norm(), 1e-8);
  }
}

// Oracle: smallest singular value from power iteration on (MᵀM)⁻¹.
double smallest_singular_value(const MatrixXd& M) {
  const MatrixXd inv = (M.transpose() * M).inverse();
  VectorXd v = VectorXd::Ones(M.cols());
  double lambda = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const VectorXd w = inv * v;
    lambda = w.norm() / v.norm();
    v = w.normalized();
  }
  return 1.0 / std::sqrt(lambda);
}

GTEST_TEST(NullspaceVector, FullRankHasNone) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXd M = MatrixXd::NullaryExpr(4, 4, [&] { return nd(rng); });
    const double smin = smallest_singular_value(M);
    const double norm2 = Eigen::JacobiSVD<MatrixXd>(M).singularValues()[0];
    ASSERT_GT(smin, 1e-6 * norm2);
    EXPECT_FALSE(nullspace_vector(M, 1e-8).has_value());
  }
}

GTEST_TEST(SolveDare, StableScalar) {
  const MatrixXd one = MatrixXd::Ones(1, 1);
  const MatrixXd K = solve_dare(0.5 * one, one, one, one);
  EXPECT_LT(std::abs(0.5 + K(0, 0)), 0.5);
}

GTEST_TEST(SolveDare, GoldenRatio) {
  const MatrixXd one = MatrixXd::Ones(1, 1);
  const MatrixXd K = solve_dare(one, one, one, one);
  // P = 1 + P/(1+P) gives P = (1+√5)/2 and K = -P/(1+P).
  const double P = (1.0 + std::sqrt(5.0)) / 2.0;
  EXPECT_NEAR(K(0, 0), -P / (1.0 + P), 1e-10);
  EXPECT_NEAR(K(0, 0), -0.618, 1e-3);
}

GTEST_TEST(SolveDare, BuiltInAgentsStabilized) {
  for (const AgentModel& a : paper_agents()) {
    const MatrixXd K = solve_dare(a.A, a.B, MatrixXd::Identity(3, 3),
                                  MatrixXd::Identity(1, 1));
    EXPECT_LT(spectral_radius(a.A + a.B * K), 1.0);
  }
}

GTEST_TEST(SolveDare, RiccatiResidual) {
  MatrixXd A(2, 2), B(2, 1);
  A << 1, 1, 0, 1;
  B << 0, 1;
  const MatrixXd Q = MatrixXd::Identity(2, 2);
  const MatrixXd R = 0.3 * MatrixXd::Identity(1, 1);
  const MatrixXd K = solve_dare(A, B, Q, R);
  EXPECT_LT(spectral_radius(A + B * K), 1.0);
}

GTEST_TEST(SolveDare, UncontrollableUnstableFails) {
  MatrixXd A(2, 2), B(2, 1);
  A << 2, 0, 0, 0.5;
  B << 0, 1;
  EXPECT_THROW(solve_dare(A, B, MatrixXd::Identity(2, 2),
                          MatrixXd::Identity(1, 1), 1e-12, 2000),
               Error);
}

GTEST_TEST(Stability, Identity) {
  const MatrixXd I = MatrixXd::Identity(2, 2);
  EXPECT_TRUE(is_lyapunov_stable(I));
  EXPECT_FALSE(is_schur(I));
  EXPECT_NEAR(spectral_radius(I), 1.0, 1e-14);
}

GTEST_TEST(Stability, JordanBlockIsNotLyapunovStable) {
  const MatrixXd S = paper_reference().S();
  EXPECT_FALSE(is_lyapunov_stable(S));
  EXPECT_EQ(eigenvalue_multiplicity(S, 1.0), 2);
}

GTEST_TEST(Stability, BuiltInAgentsHaveSimpleUnitEigenvalue) {
  for (const AgentModel& a : paper_agents()) {
    EXPECT_TRUE(is_lyapunov_stable(a.A));
    EXPECT_EQ(eigenvalue_multiplicity(a.A, 1.0), 1);
    EXPECT_TRUE(is_schur(a.A + a.B * *a.K));
  }
}

GTEST_TEST(Stability, EigenvaluesAgainstCharacteristicPolynomial) {
  MatrixXd M(3, 3);
  M << 2, 0, 0, 0, 0, -1, 0, 1, 0;  // 2 and ±i
  const Eigen::VectorXcd ev = eigenvalues(M);
  ASSERT_EQ(ev.size(), 3);
  for (Eigen::Index k = 0; k < 3; ++k) {
    const std::complex<double> l = ev[k];
    EXPECT_LT(std::abs((l - 2.0) * (l * l + 1.0)), 1e-12);
  }
  EXPECT_NEAR(spectral_radius(M), 2.0, 1e-12);
  EXPECT_FALSE(is_lyapunov_stable(M));
}

GTEST_TEST(Stability, RotationIsLyapunovStable) {
  MatrixXd M(2, 2);
  M << 0, -1, 1, 0;
  EXPECT_TRUE(is_lyapunov_stable(M));
  EXPECT_FALSE(is_schur(M));
}

GTEST_TEST(ComplexRank, Basic) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(3, 3);
  M(0, 0) = 1.0;
  M(1, 1) = std::complex<double>(0, 1);
  EXPECT_EQ(complex_rank(M), 2);
}

}  // namespace
}  // namespace imcons
