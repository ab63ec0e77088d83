#include "imcons/simulator.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "imcons/error.hpp"
#include "imcons/format.hpp"

namespace imcons {

namespace {

// Least-squares slope of log(values) against their index offsets.
double log_slope(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  if (values.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = static_cast<double>(k);
    const double y = std::log(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

AgentSetup make_agent(std::string name, AgentModel model,
                      const ReferenceModel& ref, const McaiOptions& opts,
                      VectorXd x0, Vector2d omega0) {
  AgentSetup a;
  a.name = std::move(name);
  a.sol = solve_regulator(model, ref);
  a.set = compute_mcai(model, a.sol, opts);
  a.model = std::move(model);
  if (x0.size() != a.model.states()) {
    throw Error(ErrorCode::kDimensionMismatch,
                a.name + ": initial state has wrong size");
  }
  a.x0 = std::move(x0);
  a.omega0 = omega0;
  return a;
}

std::vector<std::string> validate_scenario(const Scenario& sc) {
  std::vector<std::string> problems;
  try {
    sc.schedule.validate();
  } catch (const Error& e) {
    problems.emplace_back(e.what());
    return problems;
  }
  if (sc.schedule.nodes() != static_cast<int>(sc.agents.size())) {
    problems.push_back("schedule has " + std::to_string(sc.schedule.nodes()) +
                       " nodes for " + std::to_string(sc.agents.size()) +
                       " agents");
    return problems;
  }
  const auto conn = check_uniform_connectivity(sc.schedule);
  if (!conn.connected) {
    problems.push_back("A1: union graph over window starting at t=" +
                       std::to_string(conn.failing_start) +
                       " is not strongly connected");
  }
  std::vector<Interval> iv;
  for (const auto& a : sc.agents) {
    try {
      iv.push_back(w_eps_interval(a.set));
    } catch (const Error& e) {
      problems.push_back(a.name + ": " + e.what());
    }
  }
  if (iv.size() == sc.agents.size() && !intersect(iv)) {
    problems.emplace_back("A10: the W_eps intervals have empty intersection");
  }
  return problems;
}

SimTrace run(const Scenario& sc, const RunOptions& opts) {
  const auto problems = validate_scenario(sc);
  SimTrace tr;
  tr.scenario = sc.name;
  tr.h = sc.ref.h;
  if (!problems.empty()) {
    if (opts.enforce_assumptions || sc.schedule.nodes() != static_cast<int>(sc.agents.size())) {
      std::string msg;
      for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
      throw Error(ErrorCode::kAssumptionFailure, msg);
    }
    tr.diagnostics = problems;
  }

  const std::size_t N = sc.agents.size();
  std::vector<Governor> govs;
  std::vector<VectorXd> x(N);
  std::vector<Vector2d> omega(N);
  govs.reserve(N);
  tr.agents.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto& a = sc.agents[i];
    govs.emplace_back(a.model, a.sol, a.set, sc.ref.h);
    x[i] = a.x0;
    omega[i] = a.omega0;
    tr.agents[i].name = a.name;
    tr.agents[i].steps.reserve(static_cast<std::size_t>(sc.horizon));
    tr.intervals.push_back(a.set.w2_bounds);
  }

  for (long t = 0; t < sc.horizon; ++t) {
    const Eigen::Matrix2d S_inv = s_power(sc.ref.h, -t);
    for (std::size_t i = 0; i < N; ++i) {
      const auto& a = sc.agents[i];
      StepRecord rec;
      rec.t = t;
      rec.x = x[i];
      rec.omega = omega[i];
      rec.r0 = S_inv * omega[i];
      rec.y = a.model.C * x[i];
      rec.y_ref = sc.ref.Q * omega[i];
      Governor& gov = govs[i];
      if (!gov.active() && x_in_Xinf(a.set, x[i], omega[i])) {
        gov.activate(x[i], rec.r0, t);
        tr.agents[i].entry_step = t;
      }
      if (gov.active()) {
        const GovernorStep st = gov.step(x[i], rec.r0, t);
        rec.u = st.u;
        rec.alpha = st.alpha;
        rec.mu = st.mu;
        rec.phi = st.phi;
        rec.gate = st.gate;
        rec.mode = Mode::kGovernor;
      } else {
        rec.u = VectorXd::Zero(a.model.inputs());
        rec.alpha = Vector2d::Constant(std::numeric_limits<double>::quiet_NaN());
        rec.phi = std::numeric_limits<double>::quiet_NaN();
        rec.mode = Mode::kZeroInput;
      }
      const double viol = a.model.U.max_violation(rec.u);
      if (viol > sc.tol.constraint) {
        throw Error(ErrorCode::kConstraintViolation,
                    a.name + " at t=" + std::to_string(t) + ": input exceeds U by " +
                        format_double(viol));
      }
      tr.agents[i].steps.push_back(std::move(rec));
    }
    for (std::size_t i = 0; i < N; ++i) {
      const auto& a = sc.agents[i];
      x[i] = a.model.A * x[i] + a.model.B * tr.agents[i].steps.back().u;
    }
    omega = consensus_step(omega, sc.schedule.at(t), sc.ref.h, tr.intervals);
  }
  tr.final_omega = omega;
  for (std::size_t i = 0; i < N; ++i) {
    if (!tr.agents[i].entry_step) {
      tr.diagnostics.push_back(sc.agents[i].name +
                               " never entered X_inf within the horizon");
    }
  }
  return tr;
}

Metrics metrics(const Scenario& sc, const SimTrace& trace) {
  Metrics m;
  const std::size_t N = trace.agents.size();
  const long T = N ? static_cast<long>(trace.agents.front().steps.size()) : 0;
  m.a10_ok = intersect(trace.intervals).has_value();

  // z-frame spread over time, including the final ω(T).
  std::vector<double> spread(static_cast<std::size_t>(T) + 1);
  for (long t = 0; t < T; ++t) {
    std::vector<Vector2d> om(N);
    for (std::size_t i = 0; i < N; ++i) om[i] = trace.agents[i].steps[t].omega;
    spread[t] = z_spread(om, trace.h, t);
  }
  spread[T] = z_spread(trace.final_omega, trace.h, T);
  m.final_z_spread = spread[T];
  for (long t = T; t >= 0 && spread[t] <= sc.tol.spread; --t) {
    m.spread_settled_step = t;
  }
  try {
    m.consensus = consensus_value_estimate(trace.final_omega, trace.h, T,
                                           sc.tol.spread);
  } catch (const Error&) {
    m.consensus.reset();
  }
  if (m.consensus) {
    if (auto common = intersect(trace.intervals)) {
      const double w2 = (*m.consensus)[1];
      m.consensus_in_intersection = w2 >= common->first - sc.tol.constraint &&
                                    w2 <= common->second + sc.tol.constraint;
    }
  }

  bool all_settled = true;
  bool all_decay = true;
  long total_violations = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const AgentTrace& at = trace.agents[i];
    const AgentSetup& a = sc.agents[i];
    AgentMetrics am;
    am.entry_step = at.entry_step;
    am.max_constraint_margin = -std::numeric_limits<double>::infinity();
    for (const auto& s : at.steps) {
      const double v = a.model.U.max_violation(s.u);
      am.max_constraint_margin = std::max(am.max_constraint_margin, v);
      if (v > sc.tol.constraint) ++am.violations;
    }
    for (const auto& s : at.steps) {
      if (s.mode != Mode::kZeroInput) break;
      ++am.zero_input_prefix;
    }
    // Settling: the trailing run of steps where α is unchanged and equal to
    // r0, if it spans at least settle_steps.
    long run_start = T;
    for (long t = T - 1; t >= 1; --t) {
      const auto& s = at.steps[t];
      const auto& p = at.steps[t - 1];
      const bool ok = s.mode == Mode::kGovernor && p.mode == Mode::kGovernor &&
                      (s.alpha - p.alpha).cwiseAbs().maxCoeff() < sc.tol.settle &&
                      (s.alpha - s.r0).cwiseAbs().maxCoeff() < sc.tol.settle;
      if (!ok) break;
      run_start = t;
    }
    if (T - run_start >= sc.tol.settle_steps) am.t_f = run_start;

    am.tracking_log_slope = std::numeric_limits<double>::quiet_NaN();
    am.state_log_slope = std::numeric_limits<double>::quiet_NaN();
    if (m.consensus && am.entry_step) {
      const Vector2d c = *m.consensus;
      auto errors = [&](long t) {
        const auto& s = at.steps[t];
        const Vector2d ref = s_power(trace.h, t) * c;
        const double scale = std::max(1.0, ref.norm());
        return std::array<double, 3>{(s.y - sc.ref.Q * ref).norm(),
                                     (s.x - a.sol.Pi * ref).norm(), scale};
      };
      long end = T;
      for (long t = *am.entry_step; t < T; ++t) {
        const auto e = errors(t);
        if (e[0] <= sc.tol.noise_floor * e[2]) {
          end = t;
          break;
        }
      }
      am.tail_start = std::max(*am.entry_step, end - sc.tol.tail_window);
      std::vector<double> err_y;
      std::vector<double> err_x;
      for (long t = am.tail_start; t < end; ++t) {
        const auto e = errors(t);
        err_y.push_back(e[0]);
        err_x.push_back(std::max(e[1], std::numeric_limits<double>::min()));
      }
      am.tail_points = static_cast<long>(err_y.size());
      am.tracking_log_slope = log_slope(err_y);
      am.state_log_slope = log_slope(err_x);
      if (am.t_f) {
        for (long t = *am.t_f; t < T; ++t) {
          const auto e = errors(t);
          am.post_settle_error = std::max(am.post_settle_error, e[0] / e[2]);
        }
      }
    }
    all_settled = all_settled && am.t_f.has_value();
    all_decay = all_decay && am.tracking_log_slope < 0.0;
    total_violations += am.violations;
    m.agents.push_back(am);
  }
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      m.final_alpha_spread =
          std::max(m.final_alpha_spread,
                   (trace.agents[i].steps.back().alpha -
                    trace.agents[j].steps.back().alpha)
                       .norm());
    }
  }
  m.passed = total_violations == 0 && all_settled && all_decay &&
             m.a10_ok && m.consensus_in_intersection &&
             m.final_z_spread <= sc.tol.spread;
  return m;
}

}  // namespace imcons
