#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>

#include "imcons/error.hpp"
#include "imcons/format.hpp"

namespace imcons::cli {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kConfig, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::kConfig, "write failed: " + path.string());
}

std::filesystem::path prepare(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw Error(ErrorCode::kConfig, "cannot create " + dir + ": " + ec.message());
  return p;
}

void row(std::ostream& out, const std::string& who, const std::string& id, bool ok,
         const std::string& detail) {
  out << std::left << std::setw(12) << who << std::setw(18) << id
      << (ok ? "pass" : "FAIL");
  if (!detail.empty()) out << "  " << detail;
  out << "\n";
}

std::string interval(const std::pair<double, double>& iv) {
  return "[" + format_double(iv.first) + ", " + format_double(iv.second) + "]";
}

}  // namespace

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kConfig:
    case ErrorCode::kAssumptionFailure:
    case ErrorCode::kDimensionMismatch:
      return kValidation;
    default:
      return kRuntime;
  }
}

int cmd_check(const RunConfig& config, std::ostream& out) {
  bool ok = true;
  out << std::left << std::setw(12) << "subject" << std::setw(18) << "assumption"
      << "status\n";
  std::vector<Interval> intervals;
  bool have_all_intervals = true;
  for (const AgentConfig& a : config.agents) {
    const AgentModel m = a.model();
    const AssumptionReport rep = check_assumptions(m, config.reference);
    for (const AssumptionCheck& c : rep.checks) {
      row(out, a.name, c.id, c.passed, c.detail);
      ok = ok && c.passed;
    }
    if (!rep.all_passed()) {
      have_all_intervals = false;
      continue;
    }
    try {
      const RegulatorSolution sol = solve_regulator(m, config.reference);
      const McaiSet set = compute_mcai(m, sol, config.mcai);
      intervals.push_back(w_eps_interval(set));
      row(out, a.name, "MCAI", true, "t*=" + std::to_string(set.t_star) +
                                         " W_eps=" + interval(set.w2_bounds));
    } catch (const Error& e) {
      row(out, a.name, "MCAI", false,
          std::string(to_string(e.code())) + ": " + e.what());
      ok = false;
      have_all_intervals = false;
    }
  }
  try {
    config.schedule.validate();
    const ConnectivityReport r = check_uniform_connectivity(config.schedule);
    row(out, "network", "A1", r.connected,
        r.connected ? "window " + std::to_string(config.schedule.window)
                    : "window starting at t=" + std::to_string(r.failing_start) +
                          " is not strongly connected");
    ok = ok && r.connected;
  } catch (const Error& e) {
    row(out, "network", "schedule", false, e.what());
    ok = false;
  }
  if (have_all_intervals) {
    const auto common = intersect(intervals);
    row(out, "network", "A10", common.has_value(),
        common ? "common rate interval " + interval(*common)
               : "rate intervals do not intersect");
    ok = ok && common.has_value();
  } else {
    row(out, "network", "A10", false, "skipped: some agent has no rate interval");
  }
  out << (ok ? "all assumptions hold\n" : "assumption check failed\n");
  return ok ? kOk : kValidation;
}

int cmd_mcai(const RunConfig& config, const std::string& out_dir, std::ostream& out) {
  const std::filesystem::path dir = prepare(out_dir);
  out << std::left << std::setw(12) << "agent" << std::setw(6) << "t*" << std::setw(7)
      << "rows" << std::setw(44) << "w2 bounds" << "w2 bounds (eps-tightened)\n";
  for (const AgentConfig& a : config.agents) {
    const AgentModel m = a.model();
    McaiSet set;
    try {
      set = compute_mcai(m, solve_regulator(m, config.reference), config.mcai);
    } catch (const Error& e) {
      throw Error(e.code(), a.name + ": " + std::string(to_string(e.code())) + ": " +
                                e.what());
    }
    write_file(dir / (a.name + ".mcai"), to_text(set));
    out << std::left << std::setw(12) << a.name << std::setw(6) << set.t_star
        << std::setw(7) << set.rows() << std::setw(44)
        << interval(set.w2_bounds_untightened) << interval(set.w2_bounds) << "\n";
  }
  return kOk;
}

int cmd_run(const RunConfig& config, const std::string& out_dir, bool plots,
            std::ostream& out) {
  const Scenario sc = build_scenario(config);
  const SimTrace trace = run(sc);
  const Metrics m = metrics(sc, trace);
  const std::filesystem::path dir = prepare(out_dir);
  for (const AgentTrace& a : trace.agents) {
    write_file(dir / (a.name + ".csv"), trace_csv(a));
  }
  write_file(dir / "metrics.json", metrics_json(sc, trace, m));
  write_file(dir / "config.json", emit_config(config));
  if (plots) {
    for (const auto& [name, svg] : figure_set(sc, trace)) write_file(dir / name, svg);
  }
  for (std::size_t i = 0; i < m.agents.size(); ++i) {
    const AgentMetrics& a = m.agents[i];
    out << sc.agents[i].name << ": violations=" << a.violations
        << " entry=" << (a.entry_step ? std::to_string(*a.entry_step) : "none")
        << " t_f=" << (a.t_f ? std::to_string(*a.t_f) : "none")
        << " slope=" << format_double(a.tracking_log_slope) << "\n";
  }
  if (m.consensus) {
    out << "consensus omega(0) = (" << format_double((*m.consensus)[0]) << ", "
        << format_double((*m.consensus)[1]) << ")\n";
  }
  for (const std::string& d : trace.diagnostics) out << "diagnostic: " << d << "\n";
  out << "spread=" << format_double(m.final_z_spread)
      << (m.passed ? "  all run criteria met\n" : "  run criteria NOT met\n");
  return kOk;
}

}  // namespace imcons::cli
