#include "imcons/governor.hpp"

#include <cmath>
#include <limits>

#include "imcons/error.hpp"

namespace imcons {

Eigen::Matrix2d s_power(double h, long t) {
  Eigen::Matrix2d s;
  s << 1.0, h * static_cast<double>(t), 0.0, 1.0;
  return s;
}

Vector2d init_alpha(const McaiSet& set, double h, const VectorXd& x0,
                    const Vector2d& r0, long t0) {
  if (x0.size() != set.states()) {
    throw Error(ErrorCode::kDimensionMismatch, "state size");
  }
  const auto [lo, hi] = w_eps_interval(set);
  const Eigen::Index l = set.rows();
  MatrixXd G(l + 2, 2);
  VectorXd g(l + 2);
  G.topRows(l) = set.Hw * s_power(h, t0);
  g.head(l) = VectorXd::Ones(l) - set.Hx * x0;
  G.row(l) << 0.0, std::isfinite(hi) ? 1.0 : 0.0;
  g[l] = std::isfinite(hi) ? hi : 0.0;
  G.row(l + 1) << 0.0, std::isfinite(lo) ? -1.0 : 0.0;
  g[l + 1] = std::isfinite(lo) ? -lo : 0.0;
  try {
    return min_norm_point_2d(r0, G, g);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInfeasible) throw;
    throw Error(ErrorCode::kInfeasible,
                "no admissible alpha at t=" + std::to_string(t0) +
                    ": state is outside X_inf");
  }
}

double solve_phi(const McaiSet& set, double h, const VectorXd& x_t,
                 const Vector2d& r0, const Vector2d& alpha_prev, long t) {
  if (x_t.size() != set.states()) {
    throw Error(ErrorCode::kDimensionMismatch, "state size");
  }
  const Eigen::Matrix2d St = s_power(h, t);
  const VectorXd slack =
      VectorXd::Ones(set.rows()) - set.Hx * x_t - set.Hw * (St * alpha_prev);
  const VectorXd coef = set.Hw * (St * (r0 - alpha_prev));
  double phi = 1.0;
  for (Eigen::Index j = 0; j < slack.size(); ++j) {
    if (slack[j] < -1e-9) {
      throw Error(ErrorCode::kInvariantBroken,
                  "governor state left O_inf at t=" + std::to_string(t) +
                      " (row " + std::to_string(j) + " violated by " +
                      std::to_string(-slack[j]) + ")");
    }
    if (coef[j] > 0.0) phi = std::min(phi, std::max(slack[j], 0.0) / coef[j]);
  }
  return std::max(phi, 0.0);
}

Governor::Governor(const AgentModel& agent, const RegulatorSolution& sol,
                   const McaiSet& set, double h)
    : K_(sol.K),
      L_(sol.L),
      Pi_(sol.Pi),
      AK_(agent.A + agent.B * sol.K),
      U_(agent.U),
      set_(set),
      h_(h) {}

void Governor::activate(const VectorXd& x0, const Vector2d& r0, long t0) {
  alpha_ = init_alpha(set_, h_, x0, r0, t0);
  t0_ = t0;
  active_ = true;
  x_prev_.reset();
}

GovernorStep Governor::step(const VectorXd& x_t, const Vector2d& r0, long t) {
  if (!active_) {
    throw Error(ErrorCode::kNotInitialized, "governor has no alpha yet");
  }
  GovernorStep out;
  out.t = t;
  out.phi = std::numeric_limits<double>::quiet_NaN();
  if (t != t0_) {
    if (!x_prev_ || t != t_prev_ + 1) {
      throw Error(ErrorCode::kInvariantBroken,
                  "governor steps must be consecutive (t=" +
                      std::to_string(t) + ")");
    }
    const VectorXd x_tilde_prev = *x_prev_ - Pi_ * (s_power(h_, t - 1) * alpha_);
    const VectorXd x_dagger = AK_ * x_tilde_prev;
    out.gate = in_tilde_delta(set_, x_dagger, alpha_[1], true);
    if (out.gate) {
      out.phi = solve_phi(set_, h_, x_t, r0, alpha_, t);
      out.mu = out.phi;
    }
    if (out.mu == 1.0) {
      alpha_ = r0;
    } else if (out.mu > 0.0) {
      alpha_ += out.mu * (r0 - alpha_);
    }
  }
  out.alpha = alpha_;
  // In exact arithmetic u ∈ U; only roundoff-sized excess is absorbed.
  out.u = U_.pull_inside(K_ * x_t + L_ * (s_power(h_, t) * alpha_), kInputRoundoff);
  x_prev_ = x_t;
  t_prev_ = t;
  return out;
}

}  // namespace imcons
