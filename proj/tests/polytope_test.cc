#include "imcons/polytope.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "imcons/error.hpp"

namespace imcons {
namespace {

HPolytope unit_box(int d) {
  return HPolytope::box(VectorXd::Constant(d, -1.0), VectorXd::Constant(d, 1.0));
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::kConfig;
}

// A random polytope containing the origin strictly, with unnormalized rhs.
HPolytope random_polytope(std::mt19937_64& rng, int d, int m) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.3, 3.0);
  MatrixXd G(m, d);
  VectorXd g(m);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < d; ++j) G(k, j) = nd(rng);
    g[k] = ud(rng);
  }
  return {G, g};
}

GTEST_TEST(HPolytope, ContainsUnitBox) {
  const HPolytope P = unit_box(2);
  EXPECT_TRUE(P.contains(Vector2d::Zero()));
  EXPECT_FALSE(P.contains(Vector2d(1 + 1e-6, 0)));
  EXPECT_TRUE(P.contains(Vector2d(1, 1)));
  EXPECT_FALSE(P.contains(Vector2d(1, 1), 1e-3));
  EXPECT_EQ(code_of([&] { P.contains(VectorXd::Zero(3)); }),
            ErrorCode::kDimensionMismatch);
}

GTEST_TEST(HPolytope, ZeroRowsDroppedUnlessInfeasible) {
  MatrixXd G(3, 1);
  G << 1, 0, 0;
  const HPolytope P(G, Eigen::Vector3d(1, 5, 0));
  EXPECT_EQ(P.num_rows(), 1);
  const HPolytope Q(G, Eigen::Vector3d(1, -1, 0));
  EXPECT_EQ(Q.num_rows(), 2);
  EXPECT_FALSE(Q.contains(VectorXd::Zero(1)));
}

GTEST_TEST(HPolytope, RedundancyOneDimensional) {
  MatrixXd G(1, 1);
  G << 1;
  const HPolytope P(G, VectorXd::Ones(1));
  EXPECT_TRUE(P.is_redundant(VectorXd::Ones(1), 2.0));
  EXPECT_FALSE(P.is_redundant(VectorXd::Ones(1), 0.5));
  // {x <= 1} is unbounded below, so -x <= 5 is not implied.
  EXPECT_FALSE(P.is_redundant(-VectorXd::Ones(1), 5.0));
}

GTEST_TEST(HPolytope, RedundancyOnEmptyThrows) {
  MatrixXd G(2, 1);
  G << 1, -1;
  const HPolytope P(G, Eigen::Vector2d(-1, -1));
  EXPECT_EQ(code_of([&] { P.is_redundant(VectorXd::Ones(1), 1.0); }),
            ErrorCode::kInfeasible);
}

GTEST_TEST(HPolytope, CoordinateBounds) {
  const auto [lo, hi] = unit_box(3).coordinate_bounds(0);
  EXPECT_NEAR(lo, -1.0, 1e-12);
  EXPECT_NEAR(hi, 1.0, 1e-12);
  MatrixXd G(2, 2);
  G << 1, 0, -1, 0;
  const HPolytope strip(G, Eigen::Vector2d(1, 1));
  EXPECT_EQ(code_of([&] { strip.coordinate_bounds(1); }), ErrorCode::kUnbounded);
  const HPolytope empty(G, Eigen::Vector2d(-1, -1));
  EXPECT_EQ(code_of([&] { empty.coordinate_bounds(0); }), ErrorCode::kInfeasible);
}

GTEST_TEST(HPolytope, Normalize) {
  MatrixXd G(1, 1);
  G << 2;
  const HPolytope P = HPolytope(G, VectorXd::Constant(1, 4.0)).normalize();
  EXPECT_DOUBLE_EQ(P.G()(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(P.g()[0], 1.0);
  const HPolytope U = unit_box(1).normalize();
  EXPECT_EQ(U.G(), unit_box(1).G());
  EXPECT_EQ(U.g(), unit_box(1).g());
  EXPECT_EQ(code_of([&] { HPolytope(G, VectorXd::Zero(1)).normalize(); }),
            ErrorCode::kOriginNotInterior);
}

GTEST_TEST(HPolytope, NormalizePreservesMembership) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ud(-3.0, 3.0);
  const HPolytope P = random_polytope(rng, 3, 12);
  const HPolytope N = P.normalize();
  for (int s = 0; s < 10000; ++s) {
    const VectorXd x = VectorXd::NullaryExpr(3, [&] { return ud(rng); });
    // Skip points within roundoff of a facet.
    if (std::abs(P.max_violation(x)) < 1e-12) continue;
    EXPECT_EQ(P.contains(x), N.contains(x));
  }
}

GTEST_TEST(HPolytope, RedundantRowLeavesMembershipUnchanged) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(-4.0, 4.0);
  const HPolytope P = random_polytope(rng, 2, 8);
  int redundant_found = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const VectorXd r = Vector2d(nd(rng), nd(rng));
    const double b = 0.5 + 3.0 * std::abs(nd(rng));
    if (!P.is_redundant(r, b)) continue;
    ++redundant_found;
    const HPolytope Q = P.with_rows(r.transpose(), VectorXd::Constant(1, b));
    for (int s = 0; s < 10000 / 40; ++s) {
      const VectorXd x = Vector2d(ud(rng), ud(rng));
      EXPECT_EQ(P.contains(x), Q.contains(x));
    }
  }
  EXPECT_GT(redundant_found, 0);
}

GTEST_TEST(HPolytope, RemoveRedundantKeepsSet) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ud(-3.0, 3.0);
  const HPolytope P = random_polytope(rng, 2, 30).normalize();
  const HPolytope R = P.remove_redundant();
  EXPECT_LT(R.num_rows(), P.num_rows());
  for (int s = 0; s < 10000; ++s) {
    const VectorXd x = Vector2d(ud(rng), ud(rng));
    if (std::abs(P.max_violation(x)) < 1e-9) continue;
    EXPECT_EQ(P.contains(x), R.contains(x));
  }
}

GTEST_TEST(HPolytope, BoundsBracketMembers) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  MatrixXd G(6, 2);
  G << 1, 1, -1, 2, -2, -1, 1, -3, 0.5, 0.2, -0.1, 1;
  const HPolytope P(G, VectorXd::Ones(6));
  const auto b0 = P.coordinate_bounds(0);
  const auto b1 = P.coordinate_bounds(1);
  int members = 0;
  for (int s = 0; s < 10000; ++s) {
    const VectorXd x = Vector2d(ud(rng), ud(rng));
    if (!P.contains(x)) continue;
    ++members;
    EXPECT_GE(x[0], b0.first - 1e-12);
    EXPECT_LE(x[0], b0.second + 1e-12);
    EXPECT_GE(x[1], b1.first - 1e-12);
    EXPECT_LE(x[1], b1.second + 1e-12);
  }
  EXPECT_GT(members, 100);
}

GTEST_TEST(HPolytope, PullInsideAbsorbsRoundoffOnly) {
  const HPolytope box = HPolytope::box(-Vector2d::Ones(), Vector2d::Ones());
  const Vector2d near(1.0 + 3e-14, -0.2);
  const VectorXd p = box.pull_inside(near, 1e-9);
  EXPECT_LE(box.max_violation(p), 0.0);
  EXPECT_NEAR((p - near).norm(), 0.0, 1e-13);
  const Vector2d far(1.1, 0.0);
  EXPECT_EQ(box.pull_inside(far, 1e-9), VectorXd(far));
  const Vector2d in(0.3, 0.4);
  EXPECT_EQ(box.pull_inside(in, 1e-9), VectorXd(in));
}

}  // namespace
}  // namespace imcons
