#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imcons/simulator.hpp"

namespace imcons {

/// One agent as written in a run configuration. U is the box
/// u_min <= u <= u_max.
struct AgentConfig {
  std::string name;
  MatrixXd A;
  MatrixXd B;
  MatrixXd C;
  VectorXd u_min;
  VectorXd u_max;
  std::optional<MatrixXd> K;
  VectorXd x0;
  Vector2d omega0 = Vector2d::Zero();

  AgentModel model() const;
};

struct RunConfig {
  std::string name = "config";
  std::vector<AgentConfig> agents;
  ReferenceModel reference;
  McaiOptions mcai;
  GraphSchedule schedule;
  long horizon = 500;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

/// Parses and validates a JSON run configuration. Every matrix is
/// dimension-checked before any numerics run. Throws Error(kConfig) with the
/// JSON path (or line and column for syntax errors) in the message.
RunConfig parse_config(std::string_view text);

/// Pretty-printed JSON; parse_config(emit_config(c)) reproduces c.
std::string emit_config(const RunConfig& config);

/// "paper-s1" or "paper-s2". A nonzero seed replaces the first scenario's
/// initial conditions and edge weights with a seeded perturbation.
RunConfig builtin_config(const std::string& name, std::uint64_t seed = 0);

/// Config view of a scenario whose input sets are boxes.
RunConfig config_from_scenario(const Scenario& sc, const McaiOptions& mcai);

/// Solves the regulator and invariant set for every agent.
Scenario build_scenario(const RunConfig& config);

/// Per-agent trace: t, x…, u…, y…, y_r…, omega1, omega2, alpha1, alpha2, mu,
/// gate, mode. LF line endings, locale-independent shortest round-trip
/// numbers.
std::string trace_csv(const AgentTrace& trace);

/// Run summary: per-agent metrics, consensus value, diagnostics.
std::string metrics_json(const Scenario& sc, const SimTrace& trace,
                         const Metrics& m);

struct PlotSeries {
  std::string label;
  std::vector<double> t;
  std::vector<double> v;
};

/// Self-contained line chart with a fixed viewport, axes autoscaled to the
/// data and the dashed horizontal `guides`.
std::string svg_plot(std::string_view title, const std::vector<PlotSeries>& series,
                     const std::vector<double>& guides = {});

/// Outputs, references and inputs (first input channel, with its bounds),
/// one polyline per agent. Returns (file name, SVG text) pairs.
std::vector<std::pair<std::string, std::string>> figure_set(
    const Scenario& sc, const SimTrace& trace);

}  // namespace imcons
