#include "imcons/mcai.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "imcons/error.hpp"
#include "imcons/format.hpp"

namespace imcons {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HPolytope normalized_input_set(const AgentModel& agent) {
  try {
    return agent.U.normalize();
  } catch (const Error& e) {
    throw Error(ErrorCode::kEmptyInterior,
                std::string("input set must contain the origin strictly: ") +
                    e.what());
  }
}

// Rows G_U [K A_K^k | Γ²] for one horizon k, given the running power A_K^k.
MatrixXd horizon_rows(const MatrixXd& GU, const MatrixXd& K,
                      const MatrixXd& AKk, const VectorXd& gamma2) {
  MatrixXd rows(GU.rows(), AKk.cols() + 1);
  rows.leftCols(AKk.cols()) = GU * K * AKk;
  rows.col(AKk.cols()) = GU * gamma2;
  return rows;
}

MatrixXd steady_rows(const MatrixXd& GU, const VectorXd& gamma2, Eigen::Index n,
                     double epsilon) {
  MatrixXd rows = MatrixXd::Zero(GU.rows(), n + 1);
  rows.col(n) = GU * gamma2 / (1.0 - epsilon);
  return rows;
}

std::pair<double, double> untightened_bounds(const MatrixXd& GU,
                                             const VectorXd& gamma2) {
  double lo = -kInf;
  double hi = kInf;
  const VectorXd c = GU * gamma2;
  for (Eigen::Index r = 0; r < c.size(); ++r) {
    if (c[r] > 1e-12) hi = std::min(hi, 1.0 / c[r]);
    if (c[r] < -1e-12) lo = std::max(lo, 1.0 / c[r]);
  }
  return {lo, hi};
}

void fill_lifted(McaiSet& set) {
  const Eigen::Index n = set.tilde.dim() - 1;
  const MatrixXd Ht = set.tilde.G().leftCols(n);
  const VectorXd hw = set.tilde.G().col(n);
  set.Hx = Ht;
  set.Hw.resize(Ht.rows(), 2);
  set.Hw.col(0) = -Ht * set.Pi.col(0);
  set.Hw.col(1) = hw - Ht * set.Pi.col(1);
}

}  // namespace

HPolytope mcai_raw_constraints(const AgentModel& agent,
                               const RegulatorSolution& sol, double epsilon,
                               int k_max) {
  const HPolytope U = normalized_input_set(agent);
  const Eigen::Index n = agent.states();
  const MatrixXd AK = agent.A + agent.B * sol.K;
  const VectorXd gamma2 = sol.gamma2();
  MatrixXd G = steady_rows(U.G(), gamma2, n, epsilon);
  MatrixXd AKk = MatrixXd::Identity(n, n);
  for (int k = 0; k <= k_max; ++k) {
    const MatrixXd rows = horizon_rows(U.G(), sol.K, AKk, gamma2);
    MatrixXd next(G.rows() + rows.rows(), n + 1);
    next << G, rows;
    G = std::move(next);
    AKk = AK * AKk;
  }
  return {G, VectorXd::Ones(G.rows())};
}

McaiSet compute_mcai(const AgentModel& agent, const RegulatorSolution& sol,
                     const McaiOptions& opts) {
  agent.validate();
  if (!(opts.epsilon > 0.0 && opts.epsilon < 1.0 && opts.delta > 0.0 &&
        opts.delta < opts.epsilon)) {
    throw Error(ErrorCode::kHorizonExceeded,
                "need 0 < delta < epsilon < 1 for finite determination (got "
                "epsilon=" + format_double(opts.epsilon) +
                    ", delta=" + format_double(opts.delta) + ")");
  }
  const HPolytope U = normalized_input_set(agent);
  const Eigen::Index n = agent.states();
  const MatrixXd AK = agent.A + agent.B * sol.K;
  if (!is_schur(AK)) {
    throw Error(ErrorCode::kUnstableFeedback, "A + B K is not Schur");
  }
  const VectorXd gamma2 = sol.gamma2();

  MatrixXd AKk = MatrixXd::Identity(n, n);
  HPolytope acc(steady_rows(U.G(), gamma2, n, opts.epsilon),
                VectorXd::Ones(U.num_rows()));
  acc = acc.with_rows(horizon_rows(U.G(), sol.K, AKk, gamma2),
                      VectorXd::Ones(U.num_rows()));

  int k = 0;
  for (;; ++k) {
    if (k + 1 > opts.max_horizon) {
      throw Error(ErrorCode::kHorizonExceeded,
                  "constraint accumulation did not terminate within " +
                      std::to_string(opts.max_horizon) + " steps");
    }
    AKk = AK * AKk;
    const MatrixXd cand = horizon_rows(U.G(), sol.K, AKk, gamma2);
    bool all_redundant = true;
    for (Eigen::Index r = 0; r < cand.rows() && all_redundant; ++r) {
      all_redundant = acc.is_redundant(cand.row(r).transpose(), 1.0);
    }
    if (all_redundant) break;
    acc = acc.with_rows(cand, VectorXd::Ones(cand.rows()));
  }

  McaiSet set;
  set.tilde = acc.remove_redundant().normalize();
  set.Pi = sol.Pi;
  set.epsilon = opts.epsilon;
  set.delta = opts.delta;
  set.t_star = k;
  try {
    set.w2_bounds = set.tilde.coordinate_bounds(n);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnbounded) throw;
    set.w2_bounds = {-kInf, kInf};
  }
  set.w2_bounds_untightened = untightened_bounds(U.G(), gamma2);
  fill_lifted(set);
  return set;
}

bool in_tilde_delta(const McaiSet& set, const VectorXd& x_tilde, double w2,
                    bool use_delta) {
  if (x_tilde.size() != set.states()) {
    throw Error(ErrorCode::kDimensionMismatch, "x̃ size");
  }
  VectorXd z(x_tilde.size() + 1);
  z << x_tilde, w2;
  if (!use_delta) return set.tilde.contains(z);
  // δ tightens the untruncated set. Steady-state rows were stored divided by
  // (1 − ε), so their untruncated rhs is 1/(1 − ε); without this a rate on
  // the edge of W_ε could never pass the gate.
  const Eigen::Index n = x_tilde.size();
  const MatrixXd& G = set.tilde.G();
  const VectorXd v = G * z;
  for (Eigen::Index r = 0; r < G.rows(); ++r) {
    const bool steady = G.row(r).head(n).norm() <= 1e-12 * G.row(r).norm();
    const double rhs = steady ? (1.0 - set.delta) / (1.0 - set.epsilon)
                              : 1.0 - set.delta;
    if (v[r] > rhs) return false;
  }
  return true;
}

bool in_O_inf(const McaiSet& set, const VectorXd& x, const Vector2d& omega) {
  if (x.size() != set.states()) {
    throw Error(ErrorCode::kDimensionMismatch, "state size");
  }
  return ((set.Hx * x + set.Hw * omega).array() <= 1.0).all();
}

std::optional<Vector2d> x_in_Xinf(const McaiSet& set, const VectorXd& x,
                                  const Vector2d& center) {
  if (x.size() != set.states()) {
    throw Error(ErrorCode::kDimensionMismatch, "state size");
  }
  const auto [lo, hi] = set.w2_bounds;
  const Eigen::Index l = set.rows();
  MatrixXd G(l + 2, 2);
  VectorXd g(l + 2);
  G.topRows(l) = set.Hw;
  g.head(l) = VectorXd::Ones(l) - set.Hx * x;
  // Infinite bounds become vacuous zero rows.
  G.row(l) << 0.0, std::isfinite(hi) ? 1.0 : 0.0;
  g[l] = std::isfinite(hi) ? hi : 0.0;
  G.row(l + 1) << 0.0, std::isfinite(lo) ? -1.0 : 0.0;
  g[l + 1] = std::isfinite(lo) ? -lo : 0.0;
  try {
    return min_norm_point_2d(center, G, g);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInfeasible) return std::nullopt;
    throw;
  }
}

std::pair<double, double> w_eps_interval(const McaiSet& set) {
  if (!(set.w2_bounds.first < set.w2_bounds.second)) {
    throw Error(ErrorCode::kEmptyInterval,
                "W_eps = [" + format_double(set.w2_bounds.first) + ", " +
                    format_double(set.w2_bounds.second) + "]");
  }
  return set.w2_bounds;
}

std::string to_text(const McaiSet& set) {
  std::ostringstream os;
  const Eigen::Index n = set.states();
  os << "imcons-mcai 1\n";
  os << "states " << n << "\n";
  os << "rows " << set.rows() << "\n";
  os << "epsilon " << format_double(set.epsilon) << "\n";
  os << "delta " << format_double(set.delta) << "\n";
  os << "t_star " << set.t_star << "\n";
  os << "w2_bounds " << format_double(set.w2_bounds.first) << " "
     << format_double(set.w2_bounds.second) << "\n";
  os << "w2_bounds_untightened "
     << format_double(set.w2_bounds_untightened.first) << " "
     << format_double(set.w2_bounds_untightened.second) << "\n";
  os << "pi";
  for (Eigen::Index i = 0; i < n; ++i) {
    os << " " << format_double(set.Pi(i, 0)) << " "
       << format_double(set.Pi(i, 1));
  }
  os << "\n";
  for (Eigen::Index r = 0; r < set.rows(); ++r) {
    os << "row";
    for (Eigen::Index j = 0; j <= n; ++j) {
      os << " " << format_double(set.tilde.G()(r, j));
    }
    os << "\n";
  }
  return os.str();
}

McaiSet mcai_from_text(const std::string& text) {
  std::istringstream is(text);
  int line_no = 0;
  std::string line;
  auto next_fields = [&](const std::string& key) {
    for (;;) {
      if (!std::getline(is, line)) {
        throw Error(ErrorCode::kConfig, "mcai text: missing '" + key + "'");
      }
      ++line_no;
      if (!line.empty()) break;
    }
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != key) {
      throw Error(ErrorCode::kConfig, "mcai text line " +
                                          std::to_string(line_no) +
                                          ": expected '" + key + "', got '" +
                                          k + "'");
    }
    std::vector<std::string> out;
    for (std::string tok; ls >> tok;) out.push_back(tok);
    return out;
  };
  auto one = [&](const std::string& key) {
    auto f = next_fields(key);
    if (f.size() != 1) {
      throw Error(ErrorCode::kConfig,
                  "mcai text line " + std::to_string(line_no) + ": '" + key +
                      "' takes one value");
    }
    return f[0];
  };
  auto pair = [&](const std::string& key) {
    auto f = next_fields(key);
    if (f.size() != 2) {
      throw Error(ErrorCode::kConfig,
                  "mcai text line " + std::to_string(line_no) + ": '" + key +
                      "' takes two values");
    }
    return std::pair{parse_double(f[0]), parse_double(f[1])};
  };

  const auto header = next_fields("imcons-mcai");
  if (header.size() != 1 || header[0] != "1") {
    throw Error(ErrorCode::kConfig, "unsupported mcai text version");
  }
  McaiSet set;
  const auto n = static_cast<Eigen::Index>(std::stol(one("states")));
  const auto l = static_cast<Eigen::Index>(std::stol(one("rows")));
  set.epsilon = parse_double(one("epsilon"));
  set.delta = parse_double(one("delta"));
  set.t_star = std::stoi(one("t_star"));
  set.w2_bounds = pair("w2_bounds");
  set.w2_bounds_untightened = pair("w2_bounds_untightened");
  const auto pi = next_fields("pi");
  if (static_cast<Eigen::Index>(pi.size()) != 2 * n) {
    throw Error(ErrorCode::kConfig, "mcai text: pi needs 2·states values");
  }
  set.Pi.resize(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    set.Pi(i, 0) = parse_double(pi[2 * i]);
    set.Pi(i, 1) = parse_double(pi[2 * i + 1]);
  }
  MatrixXd G(l, n + 1);
  for (Eigen::Index r = 0; r < l; ++r) {
    const auto f = next_fields("row");
    if (static_cast<Eigen::Index>(f.size()) != n + 1) {
      throw Error(ErrorCode::kConfig, "mcai text line " +
                                          std::to_string(line_no) +
                                          ": row needs states+1 values");
    }
    for (Eigen::Index j = 0; j <= n; ++j) G(r, j) = parse_double(f[j]);
  }
  set.tilde = HPolytope(G, VectorXd::Ones(l));
  fill_lifted(set);
  return set;
}

}  // namespace imcons
