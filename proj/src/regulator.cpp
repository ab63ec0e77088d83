#include "imcons/regulator.hpp"

#include <cmath>
#include <sstream>

#include "imcons/error.hpp"

namespace imcons {

namespace {

using cd = std::complex<double>;

std::string fmt_lambda(cd l) {
  std::ostringstream os;
  os << l.real();
  if (l.imag() != 0.0) os << (l.imag() > 0 ? "+" : "") << l.imag() << "i";
  return os.str();
}

// Rank of [A − λI, B] (horizontal) or [A − λI; C] (vertical) at each λ in
// `lambdas`; returns the first λ where the rank drops below n.
std::optional<cd> pbh_failure(const MatrixXd& A, const MatrixXd& other,
                              bool vertical, const Eigen::VectorXcd& lambdas) {
  const Eigen::Index n = A.rows();
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    const Eigen::MatrixXcd shifted =
        A.cast<cd>() - lambdas[i] * Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd M;
    if (vertical) {
      M.resize(n + other.rows(), n);
      M << shifted, other.cast<cd>();
    } else {
      M.resize(n, n + other.cols());
      M << shifted, other.cast<cd>();
    }
    if (complex_rank(M) < n) return lambdas[i];
  }
  return std::nullopt;
}

Eigen::VectorXcd unstable_part(const Eigen::VectorXcd& ev) {
  std::vector<cd> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) >= 1.0 - 1e-9) keep.push_back(ev[i]);
  }
  Eigen::VectorXcd out(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) out[i] = keep[i];
  return out;
}

}  // namespace

void AgentModel::validate() const {
  const Eigen::Index n = A.rows();
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kDimensionMismatch, what);
  };
  if (n == 0 || A.cols() != n) fail("A must be square and nonempty");
  if (B.rows() != n || B.cols() == 0) fail("B must have as many rows as A");
  if (C.cols() != n || C.rows() == 0) fail("C must have as many columns as A");
  if (U.dim() != B.cols()) fail("U dimension must equal the input count");
  if (K && (K->rows() != B.cols() || K->cols() != n)) fail("K must be p × n");
  if (!A.allFinite() || !B.allFinite() || !C.allFinite()) {
    fail("matrices must be finite");
  }
}

Eigen::Matrix2d ReferenceModel::S() const {
  Eigen::Matrix2d s;
  s << 1.0, h, 0.0, 1.0;
  return s;
}

bool AssumptionReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const AssumptionCheck* AssumptionReport::find(const std::string& id) const {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

AssumptionReport check_assumptions(const AgentModel& agent,
                                   const ReferenceModel& ref) {
  AssumptionReport rep;
  auto add = [&](std::string id, bool ok, std::string detail) {
    rep.checks.push_back({std::move(id), ok, std::move(detail)});
  };
  try {
    agent.validate();
  } catch (const Error& e) {
    add("dimensions", false, e.what());
    return rep;
  }
  const Eigen::Index n = agent.states();
  const Eigen::Index q = agent.outputs();
  const Eigen::VectorXcd ev = eigenvalues(agent.A);

  if (auto bad = pbh_failure(agent.A, agent.B, false, unstable_part(ev))) {
    add("A2-stabilizable", false, "PBH rank drop at λ=" + fmt_lambda(*bad));
  } else {
    add("A2-stabilizable", true, "");
  }
  if (auto bad = pbh_failure(agent.A, agent.C, true, ev)) {
    add("A2-observable", false, "PBH rank drop at λ=" + fmt_lambda(*bad));
  } else {
    add("A2-observable", true, "");
  }

  {
    bool ok = agent.U.num_rows() > 0 && (agent.U.g().array() > 0.0).all();
    std::string detail = ok ? "" : "origin is not in the interior of U";
    if (ok) {
      try {
        for (Eigen::Index k = 0; k < agent.U.dim(); ++k) {
          agent.U.coordinate_bounds(k);
        }
      } catch (const Error& e) {
        ok = false;
        detail = e.what();
      }
    }
    add("A4", ok, detail);
  }

  {
    const bool q_ok = ref.Q.cols() == 2 && ref.Q.rows() == q;
    if (!q_ok) {
      add("A5", false, "Q must be q × 2 with q = rows of C");
    } else {
      Eigen::MatrixXd M(2 + q, 2);
      M << ref.S() - Eigen::Matrix2d::Identity(), ref.Q;
      const bool obs = complex_rank(M.cast<cd>()) == 2;
      add("A5", obs, obs ? "" : "(S, Q) is not observable");
    }
  }
  add("A6", ref.h > 0.0, ref.h > 0.0 ? "" : "step h must be positive");

  {
    MatrixXd M = MatrixXd::Zero(n + q, n + agent.inputs());
    M.topLeftCorner(n, n) = agent.A - MatrixXd::Identity(n, n);
    M.topRightCorner(n, agent.inputs()) = agent.B;
    M.bottomLeftCorner(q, n) = agent.C;
    const int r = complex_rank(M.cast<cd>());
    add("A7", r == n + q,
        r == n + q ? "" : "[[A-I, B], [C, 0]] has rank " + std::to_string(r));
  }

  const int mult1 = eigenvalue_multiplicity(agent.A, 1.0);
  add("A8", mult1 >= 1, mult1 >= 1 ? "" : "A has no eigenvalue at 1");

  try {
    const RegulatorSolution sol = solve_regulator(agent, ref);
    const Eigen::Index p = agent.inputs();
    MatrixXd Aaug = MatrixXd::Zero(n + 1, n + 1);
    Aaug.topLeftCorner(n, n) = agent.A + agent.B * sol.K;
    Aaug(n, n) = 1.0;
    MatrixXd Caug(p, n + 1);
    Caug << sol.K, sol.gamma2();
    const auto bad = pbh_failure(Aaug, Caug, true, eigenvalues(Aaug));
    add("A9", !bad,
        bad ? "closed-loop pair unobservable at λ=" + fmt_lambda(*bad) : "");
  } catch (const Error& e) {
    add("A9", false, std::string("regulator unavailable: ") + e.what());
  }

  const bool lyap = is_lyapunov_stable(agent.A);
  add("A11", lyap && mult1 == 1,
      !lyap ? "A is not Lyapunov stable"
            : (mult1 != 1 ? "eigenvalue 1 has multiplicity " +
                                std::to_string(mult1)
                          : ""));
  return rep;
}

RegulatorSolution solve_regulator(const AgentModel& agent,
                                  const ReferenceModel& ref) {
  agent.validate();
  const Eigen::Index n = agent.states();
  const Eigen::Index p = agent.inputs();
  const Eigen::Index q = agent.outputs();
  if (ref.Q.rows() != q || ref.Q.cols() != 2) {
    throw Error(ErrorCode::kDimensionMismatch, "Q must be q × 2");
  }
  const MatrixXd AmI = agent.A - MatrixXd::Identity(n, n);

  RegulatorSolution sol;
  const auto xi = nullspace_vector(AmI, 1e-8);
  if (!xi) {
    throw Error(ErrorCode::kNoUnitEigenvector, "A has no eigenvalue at 1");
  }
  sol.xi = *xi;

  const VectorXd Cxi = agent.C * sol.xi;
  const VectorXd Q1 = ref.Q.col(0);
  if (Q1.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorCode::kScalingImpossible, "first column of Q is zero");
  }
  if (Cxi.norm() < 1e-12) {
    throw Error(ErrorCode::kScalingImpossible,
                "C ξ vanishes; (A, C) is numerically unobservable");
  }
  if (q == 1) {
    sol.gamma = Q1[0] / Cxi[0];
  } else {
    sol.gamma = Cxi.dot(Q1) / Cxi.squaredNorm();
    if ((Cxi * sol.gamma - Q1).cwiseAbs().maxCoeff() > 1e-8) {
      throw Error(ErrorCode::kScalingImpossible,
                  "Q¹ is not a multiple of C ξ; see compatible_output_map");
    }
  }
  const VectorXd pi1 = sol.gamma * sol.xi;

  MatrixXd M = MatrixXd::Zero(n + q, n + p);
  M.topLeftCorner(n, n) = AmI;
  M.topRightCorner(n, p) = agent.B;
  M.bottomLeftCorner(q, n) = agent.C;
  VectorXd rhs(n + q);
  rhs << ref.h * pi1, ref.Q.col(1);
  const VectorXd z = M.completeOrthogonalDecomposition().solve(rhs);
  const double resid = (M * z - rhs).cwiseAbs().maxCoeff();
  if (!(resid <= 1e-8)) {
    throw Error(ErrorCode::kRegulatorInfeasible,
                "second-column residual " + std::to_string(resid));
  }

  sol.Pi.resize(n, 2);
  sol.Pi << pi1, z.head(n);
  sol.Gamma = MatrixXd::Zero(p, 2);
  sol.Gamma.col(1) = z.tail(p);

  sol.K = agent.K ? *agent.K
                  : solve_dare(agent.A, agent.B, MatrixXd::Identity(n, n),
                               MatrixXd::Identity(p, p));
  if (!is_schur(agent.A + agent.B * sol.K)) {
    throw Error(ErrorCode::kUnstableFeedback, "A + B K is not Schur");
  }
  sol.L = sol.Gamma - sol.K * sol.Pi;
  return sol;
}

MatrixXd compatible_output_map(const AgentModel& agent, const VectorXd& q2) {
  agent.validate();
  const Eigen::Index n = agent.states();
  const auto xi = nullspace_vector(agent.A - MatrixXd::Identity(n, n), 1e-8);
  if (!xi) {
    throw Error(ErrorCode::kNoUnitEigenvector, "A has no eigenvalue at 1");
  }
  if (q2.size() != agent.outputs()) {
    throw Error(ErrorCode::kDimensionMismatch, "q2 must have q entries");
  }
  MatrixXd Q(agent.outputs(), 2);
  Q << agent.C * *xi, q2;
  return Q;
}

VectorXd control_law(const RegulatorSolution& sol, const VectorXd& x,
                     const Vector2d& omega) {
  if (x.size() != sol.K.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "state size for control law");
  }
  return sol.K * x + sol.L * omega;
}

std::pair<double, double> regulator_residuals(const AgentModel& agent,
                                              const ReferenceModel& ref,
                                              const MatrixXd& Pi,
                                              const MatrixXd& Gamma) {
  const MatrixXd r1 = agent.A * Pi - Pi * ref.S() + agent.B * Gamma;
  const MatrixXd r2 = agent.C * Pi - ref.Q;
  return {r1.cwiseAbs().maxCoeff(), r2.cwiseAbs().maxCoeff()};
}

}  // namespace imcons
