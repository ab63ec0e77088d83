#include "imcons/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "imcons/error.hpp"

namespace imcons {

namespace {

// Dense simplex tableau. Row 0 holds reduced costs d_j (maximization:
// optimal when every allowed d_j >= -tol); the last column is the rhs.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : t_(MatrixXd::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  int rows() const { return static_cast<int>(basis_.size()); }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  double& at(int r, int c) { return t_(r + 1, c); }
  double& rhs(int r) { return t_(r + 1, cols()); }
  std::vector<int>& basis() { return basis_; }

  // Installs objective `cost` (per column) in canonical form w.r.t. the
  // current basis.
  void set_objective(const VectorXd& cost) {
    t_.row(0).setZero();
    for (int j = 0; j < cols(); ++j) t_(0, j) = -cost[j];
    for (int r = 0; r < rows(); ++r) {
      const double cb = cost[basis_[r]];
      if (cb != 0.0) t_.row(0) += cb * t_.row(r + 1);
    }
  }

  double objective_value() const { return t_(0, t_.cols() - 1); }

  void pivot(int r, int c) {
    const int pr = r + 1;
    t_.row(pr) /= t_(pr, c);
    for (int i = 0; i < t_.rows(); ++i) {
      if (i == pr) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(pr);
    }
    basis_[r] = c;
  }

  enum class Outcome { kOptimal, kUnbounded };

  // Bland's rule: lowest-index entering column, ties in the ratio test broken
  // by lowest basic-variable index.
  Outcome optimize(int allowed_cols, long max_pivots) {
    for (long it = 0;; ++it) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (t_(0, j) < -kLpTolerance) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Outcome::kOptimal;
      if (it >= max_pivots) {
        throw Error(ErrorCode::kIterationLimit,
                    "simplex exceeded " + std::to_string(max_pivots) +
                        " pivots");
      }
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows(); ++r) {
        const double a = at(r, enter);
        if (a > kLpTolerance) best = std::min(best, std::max(rhs(r), 0.0) / a);
      }
      if (!std::isfinite(best)) return Outcome::kUnbounded;
      int leave = -1;
      for (int r = 0; r < rows(); ++r) {
        const double a = at(r, enter);
        if (a <= kLpTolerance) continue;
        if (std::max(rhs(r), 0.0) / a <= best + kLpTolerance &&
            (leave < 0 || basis_[r] < basis_[leave])) {
          leave = r;
        }
      }
      pivot(leave, enter);
    }
  }

 private:
  MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const LpProblem& p) {
  const int n = static_cast<int>(p.objective.size());
  if (p.G.cols() != n && p.G.rows() > 0) {
    throw Error(ErrorCode::kDimensionMismatch, "LP constraint matrix columns");
  }
  if (p.G.rows() != p.g.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "LP rhs length");
  }
  if ((p.lower.size() != 0 && p.lower.size() != n) ||
      (p.upper.size() != 0 && p.upper.size() != n)) {
    throw Error(ErrorCode::kDimensionMismatch, "LP bound length");
  }

  // Fold finite bounds into rows.
  std::vector<std::pair<VectorXd, double>> extra;
  for (int j = 0; j < n; ++j) {
    if (p.upper.size() && std::isfinite(p.upper[j])) {
      VectorXd r = VectorXd::Zero(n);
      r[j] = 1.0;
      extra.emplace_back(r, p.upper[j]);
    }
    if (p.lower.size() && std::isfinite(p.lower[j])) {
      VectorXd r = VectorXd::Zero(n);
      r[j] = -1.0;
      extra.emplace_back(r, -p.lower[j]);
    }
  }
  const int m = static_cast<int>(p.G.rows() + extra.size());
  MatrixXd G(m, n);
  VectorXd g(m);
  if (p.G.rows() > 0) {
    G.topRows(p.G.rows()) = p.G;
    g.head(p.g.size()) = p.g;
  }
  for (std::size_t k = 0; k < extra.size(); ++k) {
    G.row(p.G.rows() + k) = extra[k].first.transpose();
    g[p.G.rows() + k] = extra[k].second;
  }
  for (int i = 0; i < m; ++i) {
    if (!std::isfinite(g[i])) {
      throw Error(ErrorCode::kDimensionMismatch, "LP rhs must be finite");
    }
  }

  // Columns: x⁺ (n) | x⁻ (n) | slack (m) | artificial (one per negative rhs).
  std::vector<int> neg_rows;
  for (int i = 0; i < m; ++i) {
    if (g[i] < 0.0) neg_rows.push_back(i);
  }
  const int num_art = static_cast<int>(neg_rows.size());
  const int structural = 2 * n + m;
  Tableau tab(m, structural + num_art);
  int art = structural;
  for (int i = 0; i < m; ++i) {
    const double s = g[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      tab.at(i, j) = s * G(i, j);
      tab.at(i, n + j) = -s * G(i, j);
    }
    tab.at(i, 2 * n + i) = s;
    tab.rhs(i) = s * g[i];
    if (g[i] < 0.0) {
      tab.at(i, art) = 1.0;
      tab.basis()[i] = art++;
    } else {
      tab.basis()[i] = 2 * n + i;
    }
  }
  const long cap = 10L * (tab.rows() + tab.cols());

  if (num_art > 0) {
    VectorXd cost = VectorXd::Zero(tab.cols());
    cost.tail(num_art).setConstant(-1.0);
    tab.set_objective(cost);
    tab.optimize(tab.cols(), cap);
    if (tab.objective_value() < -kLpTolerance * std::max(1.0, g.cwiseAbs().maxCoeff())) {
      return {LpStatus::kInfeasible, 0.0, {}};
    }
    // Drive zero-level artificials out of the basis.
    for (int r = 0; r < tab.rows(); ++r) {
      if (tab.basis()[r] < structural) continue;
      for (int j = 0; j < structural; ++j) {
        if (std::abs(tab.at(r, j)) > kLpTolerance) {
          tab.pivot(r, j);
          break;
        }
      }
    }
  }

  VectorXd cost = VectorXd::Zero(tab.cols());
  cost.head(n) = p.objective;
  cost.segment(n, n) = -p.objective;
  tab.set_objective(cost);
  if (tab.optimize(structural, cap) == Tableau::Outcome::kUnbounded) {
    return {LpStatus::kUnbounded, std::numeric_limits<double>::infinity(), {}};
  }

  VectorXd y = VectorXd::Zero(tab.cols());
  for (int r = 0; r < tab.rows(); ++r) y[tab.basis()[r]] = tab.rhs(r);
  LpResult res;
  res.status = LpStatus::kOptimal;
  res.x = y.head(n) - y.segment(n, n);
  res.value = p.objective.dot(res.x);
  return res;
}

Vector2d min_norm_point_2d(const Vector2d& center, const MatrixXd& G,
                           const VectorXd& g) {
  if (G.cols() != 2 || G.rows() != g.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "min_norm_point_2d expects k×2");
  }
  constexpr double tol = 1e-9;
  std::vector<Vector2d> a;
  std::vector<double> b;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    const double nrm = G.row(i).norm();
    if (nrm < 1e-12) {
      if (g[i] < -tol) throw Error(ErrorCode::kInfeasible, "0 <= negative rhs");
      continue;
    }
    a.emplace_back(G.row(i).transpose() / nrm);
    b.push_back(g[i] / nrm);
  }
  auto feasible = [&](const Vector2d& z) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].dot(z) > b[i] + tol) return false;
    }
    return true;
  };
  if (feasible(center)) return center;

  std::optional<Vector2d> best;
  double best_d = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector2d& z) {
    if (!feasible(z)) return;
    const double d = (z - center).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = z;
    }
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double viol = a[i].dot(center) - b[i];
    if (viol > 0.0) consider(center - viol * a[i]);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double det = a[i].x() * a[j].y() - a[i].y() * a[j].x();
      if (std::abs(det) < 1e-12) continue;
      Vector2d v((b[i] * a[j].y() - a[i].y() * b[j]) / det,
                 (a[i].x() * b[j] - b[i] * a[j].x()) / det);
      consider(v);
    }
  }
  if (!best) throw Error(ErrorCode::kInfeasible, "polygon is empty");
  return *best;
}

std::optional<VectorXd> nullspace_vector(const MatrixXd& M, double tol) {
  const Eigen::Index n = M.cols();
  if (n == 0) return std::nullopt;
  Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeFullV);
  VectorXd v = svd.matrixV().col(n - 1);
  const double norm_m = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  if ((M * v).norm() > tol * norm_m) return std::nullopt;
  Eigen::Index k;
  v.cwiseAbs().maxCoeff(&k);
  if (v[k] < 0) v = -v;
  return v;
}

MatrixXd solve_dare(const MatrixXd& A, const MatrixXd& B, const MatrixXd& Qw,
                    const MatrixXd& Rw, double tol, int max_iter) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || B.rows() != n || Qw.rows() != n || Qw.cols() != n ||
      Rw.rows() != B.cols() || Rw.cols() != B.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "solve_dare operand shapes");
  }
  MatrixXd P = Qw;
  for (int it = 0; it < max_iter; ++it) {
    const MatrixXd BtP = B.transpose() * P;
    const MatrixXd gain = (Rw + BtP * B).ldlt().solve(BtP * A);
    MatrixXd next = Qw + A.transpose() * P * A - A.transpose() * P * B * gain;
    next = 0.5 * (next + next.transpose());
    const double diff = (next - P).cwiseAbs().maxCoeff();
    P = std::move(next);
    if (diff <= tol * std::max(1.0, P.cwiseAbs().maxCoeff())) {
      const MatrixXd BtP2 = B.transpose() * P;
      MatrixXd K = -(Rw + BtP2 * B).ldlt().solve(BtP2 * A);
      if (!is_schur(A + B * K)) {
        throw Error(ErrorCode::kNoConvergence,
                    "Riccati fixed point does not stabilize (A, B)");
      }
      return K;
    }
  }
  throw Error(ErrorCode::kNoConvergence,
              "Riccati recursion did not converge in " +
                  std::to_string(max_iter) + " iterations");
}

Eigen::VectorXcd eigenvalues(const MatrixXd& M) {
  if (M.rows() != M.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "eigenvalues of non-square matrix");
  }
  if (M.rows() == 0) return {};
  Eigen::EigenSolver<MatrixXd> es;
  es.setMaxIterations(500);
  es.compute(M, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kNoConvergence, "QR eigenvalue iteration");
  }
  return es.eigenvalues();
}

double spectral_radius(const MatrixXd& M) {
  const auto ev = eigenvalues(M);
  return ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
}

bool is_schur(const MatrixXd& M, double margin) {
  return spectral_radius(M) < 1.0 - margin;
}

int eigenvalue_multiplicity(const MatrixXd& M, std::complex<double> lambda,
                            double tol) {
  const auto ev = eigenvalues(M);
  int count = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i] - lambda) <= tol) ++count;
  }
  return count;
}

int complex_rank(const Eigen::MatrixXcd& M, double tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  const auto& s = svd.singularValues();
  const double thresh = tol * std::max(1.0, s[0]);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > thresh) ++r;
  }
  return r;
}

bool is_lyapunov_stable(const MatrixXd& M, double tol) {
  const auto ev = eigenvalues(M);
  const Eigen::Index n = M.rows();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double mod = std::abs(ev[i]);
    if (mod > 1.0 + tol) return false;
    if (mod < 1.0 - 1e-6) continue;
    int alg = 0;
    for (Eigen::Index j = 0; j < ev.size(); ++j) {
      if (std::abs(ev[j] - ev[i]) <= 1e-6) ++alg;
    }
    const Eigen::MatrixXcd shifted =
        M.cast<std::complex<double>>() -
        ev[i] * Eigen::MatrixXcd::Identity(n, n);
    const int geo = static_cast<int>(n) - complex_rank(shifted, 1e-7);
    if (geo < alg) return false;
  }
  return true;
}

}  // namespace imcons
