#pragma once

#include <utility>

#include "imcons/numerics.hpp"

namespace imcons {

/// Halfspace polytope {x : G x <= g}.
///
/// Rows with norm below 1e-12 are dropped on construction when their rhs is
/// nonnegative (they constrain nothing). A zero row with negative rhs is kept
/// so that the empty set stays representable.
class HPolytope {
 public:
  HPolytope() = default;
  HPolytope(MatrixXd G, VectorXd g);

  /// Box lo <= x <= hi.
  static HPolytope box(const VectorXd& lo, const VectorXd& hi);

  Eigen::Index dim() const { return G_.cols(); }
  Eigen::Index num_rows() const { return G_.rows(); }
  const MatrixXd& G() const { return G_; }
  const VectorXd& g() const { return g_; }

  /// G x <= g - slack·1 componentwise.
  bool contains(const VectorXd& x, double slack = 0.0) const;

  /// Largest value of G x - g over the rows (<= 0 means member).
  double max_violation(const VectorXd& x) const;

  /// A point outside P by at most `tol` is scaled toward the origin until
  /// it is a member; other points are returned unchanged. Absorbs roundoff
  /// on points that are members in exact arithmetic; needs g > 0.
  VectorXd pull_inside(const VectorXd& x, double tol) const;

  /// True iff max{row·x : x ∈ P} <= rhs + 1e-9; unbounded means not
  /// redundant. Throws Error(kInfeasible) on an empty polytope.
  bool is_redundant(const VectorXd& row, double rhs) const;

  /// (min, max) of coordinate `axis` over P. Throws kInfeasible on an empty
  /// polytope and kUnbounded if the coordinate is unbounded.
  std::pair<double, double> coordinate_bounds(Eigen::Index axis) const;

  /// Rows scaled to rhs 1. Throws kOriginNotInterior if any rhs <= 0.
  HPolytope normalize() const;

  /// Drops rows implied by the remaining ones (first-to-last sweep).
  HPolytope remove_redundant() const;

  HPolytope with_rows(const MatrixXd& G, const VectorXd& g) const;

 private:
  MatrixXd G_;
  VectorXd g_;
};

inline constexpr double kRedundancyTolerance = 1e-9;

}  // namespace imcons
