#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "imcons/error.hpp"
#include "imcons/governor.hpp"
#include "imcons/io.hpp"
#include "imcons/scenario.hpp"

namespace py = pybind11;
using namespace imcons;

namespace {

AgentModel make_model(MatrixXd A, MatrixXd B, MatrixXd C, const VectorXd& u_min,
                      const VectorXd& u_max, std::optional<MatrixXd> K) {
  AgentModel m;
  m.A = std::move(A);
  m.B = std::move(B);
  m.C = std::move(C);
  if (u_min.size() != m.inputs() || u_max.size() != m.inputs()) {
    throw Error(ErrorCode::kDimensionMismatch, "input bounds must have one entry per input");
  }
  m.U = HPolytope::box(u_min, u_max);
  m.K = std::move(K);
  m.validate();
  return m;
}

ReferenceModel make_reference(double h, MatrixXd Q) {
  ReferenceModel r;
  r.h = h;
  r.Q = std::move(Q);
  return r;
}

// Column-stacked per-step arrays of one agent.
py::dict trace_arrays(const AgentTrace& a) {
  const Eigen::Index T = static_cast<Eigen::Index>(a.steps.size());
  py::dict d;
  d["name"] = a.name;
  d["entry_step"] = a.entry_step;
  if (T == 0) return d;
  const Eigen::Index n = a.steps[0].x.size(), p = a.steps[0].u.size(),
                     q = a.steps[0].y.size();
  Eigen::VectorXi t(T), gate(T), governor(T);
  MatrixXd x(T, n), u(T, p), y(T, q), yr(T, q), omega(T, 2), alpha(T, 2);
  VectorXd mu(T);
  for (Eigen::Index k = 0; k < T; ++k) {
    const StepRecord& s = a.steps[k];
    t[k] = static_cast<int>(s.t);
    x.row(k) = s.x.transpose();
    u.row(k) = s.u.transpose();
    y.row(k) = s.y.transpose();
    yr.row(k) = s.y_ref.transpose();
    omega.row(k) = s.omega.transpose();
    alpha.row(k) = s.alpha.transpose();
    mu[k] = s.mu;
    gate[k] = s.gate;
    governor[k] = s.mode == Mode::kGovernor;
  }
  d["t"] = t;
  d["x"] = x;
  d["u"] = u;
  d["y"] = y;
  d["y_ref"] = yr;
  d["omega"] = omega;
  d["alpha"] = alpha;
  d["mu"] = mu;
  d["gate"] = gate;
  d["governor"] = governor;
  return d;
}

}  // namespace

PYBIND11_MODULE(_imcons, m) {
  m.doc() = "Constrained output consensus of linear agents tracking a ramp";

  static py::handle error = py::exception<Error>(m, "Error").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<AgentModel>(m, "AgentModel")
      .def(py::init(&make_model), py::arg("A"), py::arg("B"), py::arg("C"),
           py::arg("u_min"), py::arg("u_max"), py::arg("K") = py::none())
      .def_readonly("A", &AgentModel::A)
      .def_readonly("B", &AgentModel::B)
      .def_readonly("C", &AgentModel::C)
      .def_readonly("K", &AgentModel::K);

  py::class_<ReferenceModel>(m, "ReferenceModel")
      .def(py::init(&make_reference), py::arg("h"), py::arg("Q"))
      .def_readonly("h", &ReferenceModel::h)
      .def_readonly("Q", &ReferenceModel::Q)
      .def("S", &ReferenceModel::S);

  py::class_<RegulatorSolution>(m, "RegulatorSolution")
      .def_readonly("Pi", &RegulatorSolution::Pi)
      .def_readonly("Gamma", &RegulatorSolution::Gamma)
      .def_readonly("L", &RegulatorSolution::L)
      .def_readonly("K", &RegulatorSolution::K)
      .def_readonly("xi", &RegulatorSolution::xi);

  py::class_<McaiSet>(m, "McaiSet")
      .def_readonly("Hx", &McaiSet::Hx)
      .def_readonly("Hw", &McaiSet::Hw)
      .def_readonly("Pi", &McaiSet::Pi)
      .def_readonly("epsilon", &McaiSet::epsilon)
      .def_readonly("delta", &McaiSet::delta)
      .def_readonly("t_star", &McaiSet::t_star)
      .def_readonly("w2_bounds", &McaiSet::w2_bounds)
      .def_readonly("w2_bounds_untightened", &McaiSet::w2_bounds_untightened)
      .def_property_readonly("rows", &McaiSet::rows)
      .def("to_text", [](const McaiSet& s) { return to_text(s); });

  m.def("paper_agents", &paper_agents, "The four built-in agents.");
  m.def("paper_reference", &paper_reference);
  m.def("s_power", &s_power, py::arg("h"), py::arg("t"));
  m.def(
      "check_assumptions",
      [](const AgentModel& a, const ReferenceModel& r) {
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const AssumptionCheck& c : check_assumptions(a, r).checks) {
          out.emplace_back(c.id, c.passed, c.detail);
        }
        return out;
      },
      py::arg("agent"), py::arg("reference"),
      "List of (assumption id, passed, detail).");
  m.def("solve_regulator", &solve_regulator, py::arg("agent"), py::arg("reference"));
  m.def(
      "compute_mcai",
      [](const AgentModel& a, const RegulatorSolution& s, double eps, double delta,
         int max_horizon) { return compute_mcai(a, s, {eps, delta, max_horizon}); },
      py::arg("agent"), py::arg("solution"), py::arg("epsilon") = 0.01,
      py::arg("delta") = 0.005, py::arg("max_horizon") = 1000);
  m.def("mcai_from_text", &mcai_from_text, py::arg("text"));
  m.def("in_O_inf", &in_O_inf, py::arg("set"), py::arg("x"), py::arg("omega"));
  m.def("x_in_Xinf", &x_in_Xinf, py::arg("set"), py::arg("x"),
        py::arg("center") = Vector2d::Zero());
  m.def("solve_phi", &solve_phi, py::arg("set"), py::arg("h"), py::arg("x"), py::arg("r0"),
        py::arg("alpha_prev"), py::arg("t"));

  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("name", &RunConfig::name)
      .def_readwrite("horizon", &RunConfig::horizon)
      .def_readwrite("output_dir", &RunConfig::output_dir)
      .def_readwrite("seed", &RunConfig::seed)
      .def_property_readonly("num_agents",
                             [](const RunConfig& c) { return c.agents.size(); });

  m.def("builtin_config", &builtin_config, py::arg("name"), py::arg("seed") = 0,
        "Built-in scenario as a RunConfig; use emit_config for its JSON.");
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("emit_config", &emit_config, py::arg("config"));
  m.def(
      "simulate",
      [](const RunConfig& c) {
        Scenario sc;
        SimTrace tr;
        Metrics mt;
        {
          py::gil_scoped_release release;
          sc = build_scenario(c);
          tr = run(sc);
          mt = metrics(sc, tr);
        }
        py::dict out;
        py::list agents;
        for (const AgentTrace& a : tr.agents) agents.append(trace_arrays(a));
        out["agents"] = agents;
        out["metrics_json"] = metrics_json(sc, tr, mt);
        py::list csv;
        for (const AgentTrace& a : tr.agents) csv.append(trace_csv(a));
        out["csv"] = csv;
        out["diagnostics"] = tr.diagnostics;
        return out;
      },
      py::arg("config"),
      "Runs a configuration. Returns per-agent arrays, CSV text and the metrics "
      "report (JSON text).");
}
