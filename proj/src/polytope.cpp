#include "imcons/polytope.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "imcons/error.hpp"

namespace imcons {

HPolytope::HPolytope(MatrixXd G, VectorXd g) {
  if (G.rows() != g.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "polytope has " + std::to_string(G.rows()) + " rows but " +
                    std::to_string(g.size()) + " rhs entries");
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    if (G.row(i).norm() >= 1e-12 || g[i] < 0.0) keep.push_back(i);
  }
  G_.resize(static_cast<Eigen::Index>(keep.size()), G.cols());
  g_.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    G_.row(k) = G.row(keep[k]);
    g_[k] = g[keep[k]];
  }
}

HPolytope HPolytope::box(const VectorXd& lo, const VectorXd& hi) {
  const Eigen::Index d = lo.size();
  if (hi.size() != d) throw Error(ErrorCode::kDimensionMismatch, "box bounds");
  MatrixXd G(2 * d, d);
  G << MatrixXd::Identity(d, d), -MatrixXd::Identity(d, d);
  VectorXd g(2 * d);
  g << hi, -lo;
  return {G, g};
}

bool HPolytope::contains(const VectorXd& x, double slack) const {
  if (x.size() != dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "point of size " + std::to_string(x.size()) +
                    " in polytope of dimension " + std::to_string(dim()));
  }
  return ((G_ * x - g_).array() <= -slack).all();
}

double HPolytope::max_violation(const VectorXd& x) const {
  if (x.size() != dim()) throw Error(ErrorCode::kDimensionMismatch, "point size");
  if (num_rows() == 0) return -std::numeric_limits<double>::infinity();
  return (G_ * x - g_).maxCoeff();
}

VectorXd HPolytope::pull_inside(const VectorXd& x, double tol) const {
  const double v = max_violation(x);
  if (v <= 0.0 || v > tol || (g_.array() <= 0.0).any()) return x;
  const VectorXd Gx = G_ * x;
  double s = 1.0;
  for (Eigen::Index r = 0; r < Gx.size(); ++r) {
    if (Gx[r] > g_[r]) s = std::min(s, g_[r] / Gx[r]);
  }
  VectorXd y = s * x;
  while (max_violation(y) > 0.0) {
    s = std::nextafter(s, 0.0);
    y = s * x;
  }
  return y;
}

bool HPolytope::is_redundant(const VectorXd& row, double rhs) const {
  if (row.size() != dim()) throw Error(ErrorCode::kDimensionMismatch, "row size");
  const LpResult r = solve_lp({row, G_, g_, {}, {}});
  if (r.status == LpStatus::kInfeasible) {
    throw Error(ErrorCode::kInfeasible, "redundancy test on empty polytope");
  }
  if (r.status == LpStatus::kUnbounded) return false;
  return r.value <= rhs + kRedundancyTolerance;
}

std::pair<double, double> HPolytope::coordinate_bounds(Eigen::Index axis) const {
  if (axis < 0 || axis >= dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "axis out of range");
  }
  VectorXd e = VectorXd::Zero(dim());
  e[axis] = 1.0;
  const LpResult hi = solve_lp({e, G_, g_, {}, {}});
  if (hi.status == LpStatus::kInfeasible) {
    throw Error(ErrorCode::kInfeasible, "coordinate bounds of empty polytope");
  }
  const LpResult lo = solve_lp({-e, G_, g_, {}, {}});
  if (hi.status == LpStatus::kUnbounded || lo.status == LpStatus::kUnbounded) {
    throw Error(ErrorCode::kUnbounded,
                "polytope unbounded along axis " + std::to_string(axis));
  }
  return {-lo.value, hi.value};
}

HPolytope HPolytope::normalize() const {
  MatrixXd G = G_;
  for (Eigen::Index i = 0; i < num_rows(); ++i) {
    if (!(g_[i] > 0.0)) {
      throw Error(ErrorCode::kOriginNotInterior,
                  "row " + std::to_string(i) + " has rhs " +
                      std::to_string(g_[i]));
    }
    G.row(i) /= g_[i];
  }
  return {G, VectorXd::Ones(num_rows())};
}

HPolytope HPolytope::remove_redundant() const {
  std::vector<bool> alive(static_cast<std::size_t>(num_rows()), true);
  for (Eigen::Index i = 0; i < num_rows(); ++i) {
    std::vector<Eigen::Index> others;
    for (Eigen::Index j = 0; j < num_rows(); ++j) {
      if (j != i && alive[j]) others.push_back(j);
    }
    MatrixXd G(static_cast<Eigen::Index>(others.size()), dim());
    VectorXd g(static_cast<Eigen::Index>(others.size()));
    for (std::size_t k = 0; k < others.size(); ++k) {
      G.row(k) = G_.row(others[k]);
      g[k] = g_[others[k]];
    }
    const LpResult r = solve_lp({G_.row(i).transpose(), G, g, {}, {}});
    if (r.status == LpStatus::kOptimal &&
        r.value <= g_[i] + kRedundancyTolerance) {
      alive[i] = false;
    }
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < num_rows(); ++i) {
    if (alive[i]) keep.push_back(i);
  }
  MatrixXd G(static_cast<Eigen::Index>(keep.size()), dim());
  VectorXd g(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    G.row(k) = G_.row(keep[k]);
    g[k] = g_[keep[k]];
  }
  return {G, g};
}

HPolytope HPolytope::with_rows(const MatrixXd& G, const VectorXd& g) const {
  if (G.cols() != dim() && num_rows() > 0) {
    throw Error(ErrorCode::kDimensionMismatch, "appended rows");
  }
  MatrixXd Gn(num_rows() + G.rows(), G.cols());
  VectorXd gn(num_rows() + g.size());
  Gn << G_, G;
  gn << g_, g;
  return {Gn, gn};
}

}  // namespace imcons
