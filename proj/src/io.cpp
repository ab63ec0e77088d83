#include "imcons/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "imcons/error.hpp"
#include "imcons/format.hpp"
#include "imcons/scenario.hpp"

namespace imcons {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kConfig, path + ": " + what);
}

void check_keys(const Json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(path, "unknown key '" + key + "'");
  }
}

const Json& required(const Json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path, std::string("missing key '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

long integer(const Json& j, const std::string& path, long min) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const long v = j.get<long>();
  if (v < min) fail(path, "must be at least " + std::to_string(min));
  return v;
}

VectorXd vector(const Json& j, const std::string& path, Eigen::Index size) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  if (size >= 0 && static_cast<Eigen::Index>(j.size()) != size) {
    fail(path, "expected " + std::to_string(size) + " entries, got " +
                   std::to_string(j.size()));
  }
  VectorXd v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    v[k] = number(j[k], path + "[" + std::to_string(k) + "]");
  }
  return v;
}

MatrixXd matrix(const Json& j, const std::string& path, Eigen::Index rows,
                Eigen::Index cols) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  if (rows >= 0 && static_cast<Eigen::Index>(j.size()) != rows) {
    fail(path, "expected " + std::to_string(rows) + " rows, got " +
                   std::to_string(j.size()));
  }
  if (cols < 0) {
    if (!j[0].is_array()) fail(path + "[0]", "expected an array of numbers");
    cols = static_cast<Eigen::Index>(j[0].size());
    if (cols == 0) fail(path + "[0]", "empty row");
  }
  MatrixXd M(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    M.row(r) = vector(j[r], path + "[" + std::to_string(r) + "]", cols).transpose();
  }
  return M;
}

std::string line_col(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k + 1 < byte; ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

AgentConfig parse_agent(const Json& j, const std::string& path, int index) {
  check_keys(j, path, {"name", "A", "B", "C", "u_min", "u_max", "K", "x0", "omega0"});
  AgentConfig a;
  if (j.contains("name")) {
    if (!j["name"].is_string() || j["name"].get<std::string>().empty()) {
      fail(path + ".name", "expected a non-empty string");
    }
    a.name = j["name"].get<std::string>();
  } else {
    a.name = "agent" + std::to_string(index + 1);
  }
  a.A = matrix(required(j, path, "A"), path + ".A", -1, -1);
  const Eigen::Index n = a.A.rows();
  if (a.A.cols() != n) fail(path + ".A", "must be square");
  a.B = matrix(required(j, path, "B"), path + ".B", n, -1);
  const Eigen::Index p = a.B.cols();
  a.C = matrix(required(j, path, "C"), path + ".C", -1, n);
  a.u_min = vector(required(j, path, "u_min"), path + ".u_min", p);
  a.u_max = vector(required(j, path, "u_max"), path + ".u_max", p);
  for (Eigen::Index k = 0; k < p; ++k) {
    if (!(a.u_min[k] < a.u_max[k])) {
      fail(path + ".u_max[" + std::to_string(k) + "]", "must exceed u_min");
    }
  }
  if (j.contains("K")) a.K = matrix(j["K"], path + ".K", p, n);
  a.x0 = vector(required(j, path, "x0"), path + ".x0", n);
  a.omega0 = vector(required(j, path, "omega0"), path + ".omega0", 2);
  return a;
}

GraphSchedule parse_schedule(const Json& j, const std::string& path, int nodes) {
  check_keys(j, path, {"graphs", "sequence", "dwell", "window", "weight_floor"});
  GraphSchedule s;
  const Json& graphs = required(j, path, "graphs");
  if (!graphs.is_array() || graphs.empty()) {
    fail(path + ".graphs", "expected a non-empty array");
  }
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const std::string gp = path + ".graphs[" + std::to_string(k) + "]";
    check_keys(graphs[k], gp, {"edges"});
    const Json& edges = required(graphs[k], gp, "edges");
    if (!edges.is_array()) fail(gp + ".edges", "expected an array");
    Digraph g{nodes, {}};
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::string ep = gp + ".edges[" + std::to_string(e) + "]";
      check_keys(edges[e], ep, {"agent", "neighbor", "weight"});
      Edge edge;
      edge.agent = static_cast<int>(integer(required(edges[e], ep, "agent"), ep + ".agent", 0));
      edge.neighbor =
          static_cast<int>(integer(required(edges[e], ep, "neighbor"), ep + ".neighbor", 0));
      if (edge.agent >= nodes) fail(ep + ".agent", "no such agent");
      if (edge.neighbor >= nodes) fail(ep + ".neighbor", "no such agent");
      edge.weight = number(required(edges[e], ep, "weight"), ep + ".weight");
      g.edges.push_back(edge);
    }
    s.graphs.push_back(std::move(g));
  }
  if (j.contains("sequence")) {
    const Json& seq = j["sequence"];
    if (!seq.is_array() || seq.empty()) fail(path + ".sequence", "expected a non-empty array");
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const std::string sp = path + ".sequence[" + std::to_string(k) + "]";
      const long v = integer(seq[k], sp, 0);
      if (v >= static_cast<long>(s.graphs.size())) fail(sp, "no such graph");
      s.sequence.push_back(static_cast<int>(v));
    }
  } else {
    for (std::size_t k = 0; k < s.graphs.size(); ++k) s.sequence.push_back(static_cast<int>(k));
  }
  if (j.contains("dwell")) s.dwell = static_cast<int>(integer(j["dwell"], path + ".dwell", 1));
  s.window = static_cast<int>(s.period());
  if (j.contains("window")) s.window = static_cast<int>(integer(j["window"], path + ".window", 1));
  if (j.contains("weight_floor")) {
    s.weight_floor = number(j["weight_floor"], path + ".weight_floor");
  }
  return s;
}

// Arrays of scalars stay on one line; everything else is indented.
void pretty(const Json& j, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += inner + Json(key).dump() + ": ";
      pretty(value, indent + 2, out);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) {
      return e.is_primitive();
    });
    if (flat) {
      out += "[";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ", ";
        out += j[k].dump();
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (k) out += ",\n";
      out += inner;
      pretty(j[k], indent + 2, out);
    }
    out += "\n" + pad + "]";
  } else {
    out += j.dump();
  }
}

Json to_json(const MatrixXd& M) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

// JSON has no NaN or infinity; those become null.
Json num_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string fixed(double v, int digits) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::fixed, digits);
  std::string s(buf.data(), end);
  if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) {
    s = s.front() == '-' ? s.substr(1) : s;
  }
  return s;
}

std::string tick_label(double v) {
  if (v == 0.0) return "0";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 4);
  return std::string(buf.data(), end);
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

constexpr std::array<const char*, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

AgentModel AgentConfig::model() const {
  AgentModel m;
  m.A = A;
  m.B = B;
  m.C = C;
  m.U = HPolytope::box(u_min, u_max);
  m.K = K;
  return m;
}

RunConfig parse_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kConfig,
                "syntax error at " + line_col(text, e.byte) + ": " + e.what());
  }
  check_keys(j, "$", {"name", "agents", "reference", "mcai", "schedule", "horizon",
                      "output_dir", "seed"});
  RunConfig c;
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail("$.name", "expected a string");
    c.name = j["name"].get<std::string>();
  }

  const Json& ref = required(j, "$", "reference");
  check_keys(ref, "$.reference", {"h", "Q"});
  c.reference.h = number(required(ref, "$.reference", "h"), "$.reference.h");
  if (!(c.reference.h > 0.0)) fail("$.reference.h", "must be positive");
  c.reference.Q = matrix(required(ref, "$.reference", "Q"), "$.reference.Q", -1, 2);

  const Json& agents = required(j, "$", "agents");
  if (!agents.is_array() || agents.empty()) fail("$.agents", "expected a non-empty array");
  std::set<std::string> names;
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const std::string path = "$.agents[" + std::to_string(k) + "]";
    AgentConfig a = parse_agent(agents[k], path, static_cast<int>(k));
    if (a.C.rows() != c.reference.Q.rows()) {
      fail(path + ".C", "has " + std::to_string(a.C.rows()) +
                            " rows but reference.Q has " +
                            std::to_string(c.reference.Q.rows()));
    }
    if (!names.insert(a.name).second) fail(path + ".name", "duplicate name");
    c.agents.push_back(std::move(a));
  }

  if (j.contains("mcai")) {
    const Json& m = j["mcai"];
    check_keys(m, "$.mcai", {"epsilon", "delta", "max_horizon"});
    if (m.contains("epsilon")) c.mcai.epsilon = number(m["epsilon"], "$.mcai.epsilon");
    if (m.contains("delta")) c.mcai.delta = number(m["delta"], "$.mcai.delta");
    if (m.contains("max_horizon")) {
      c.mcai.max_horizon = static_cast<int>(integer(m["max_horizon"], "$.mcai.max_horizon", 0));
    }
  }

  c.schedule = parse_schedule(required(j, "$", "schedule"), "$.schedule",
                              static_cast<int>(c.agents.size()));
  if (j.contains("horizon")) c.horizon = integer(j["horizon"], "$.horizon", 1);
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) fail("$.output_dir", "expected a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      fail("$.seed", "expected a non-negative integer");
    }
    c.seed = static_cast<std::uint64_t>(integer(j["seed"], "$.seed", 0));
  }
  return c;
}

std::string emit_config(const RunConfig& c) {
  Json j;
  j["name"] = c.name;
  Json agents = Json::array();
  for (const AgentConfig& a : c.agents) {
    Json aj;
    aj["name"] = a.name;
    aj["A"] = to_json(a.A);
    aj["B"] = to_json(a.B);
    aj["C"] = to_json(a.C);
    aj["u_min"] = to_json(a.u_min);
    aj["u_max"] = to_json(a.u_max);
    if (a.K) aj["K"] = to_json(*a.K);
    aj["x0"] = to_json(a.x0);
    aj["omega0"] = to_json(VectorXd(a.omega0));
    agents.push_back(std::move(aj));
  }
  j["agents"] = std::move(agents);
  j["reference"] = {{"h", c.reference.h}, {"Q", to_json(c.reference.Q)}};
  j["mcai"] = {{"epsilon", c.mcai.epsilon},
               {"delta", c.mcai.delta},
               {"max_horizon", c.mcai.max_horizon}};
  Json graphs = Json::array();
  for (const Digraph& g : c.schedule.graphs) {
    Json edges = Json::array();
    for (const Edge& e : g.edges) {
      edges.push_back({{"agent", e.agent}, {"neighbor", e.neighbor}, {"weight", e.weight}});
    }
    graphs.push_back({{"edges", std::move(edges)}});
  }
  j["schedule"] = {{"graphs", std::move(graphs)},
                   {"sequence", c.schedule.sequence},
                   {"dwell", c.schedule.dwell},
                   {"window", c.schedule.window},
                   {"weight_floor", c.schedule.weight_floor}};
  j["horizon"] = c.horizon;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  std::string out;
  pretty(j, 0, out);
  return out + "\n";
}

RunConfig config_from_scenario(const Scenario& sc, const McaiOptions& mcai) {
  RunConfig c;
  c.name = sc.name;
  c.reference = sc.ref;
  c.mcai = mcai;
  c.schedule = sc.schedule;
  c.horizon = sc.horizon;
  c.seed = sc.seed;
  for (const AgentSetup& s : sc.agents) {
    AgentConfig a;
    a.name = s.name;
    a.A = s.model.A;
    a.B = s.model.B;
    a.C = s.model.C;
    const Eigen::Index p = s.model.inputs();
    a.u_min.resize(p);
    a.u_max.resize(p);
    for (Eigen::Index k = 0; k < p; ++k) {
      std::tie(a.u_min[k], a.u_max[k]) = s.model.U.coordinate_bounds(k);
    }
    a.K = s.model.K;
    a.x0 = s.x0;
    a.omega0 = s.omega0;
    c.agents.push_back(std::move(a));
  }
  return c;
}

RunConfig builtin_config(const std::string& name, std::uint64_t seed) {
  const McaiOptions opts;
  if (seed == 0) return config_from_scenario(paper_scenario(name, opts), opts);
  if (name != "paper-s1") {
    throw Error(ErrorCode::kConfig, "a seed only applies to paper-s1");
  }
  RunConfig c = config_from_scenario(perturbed_paper_scenario(seed, opts), opts);
  c.seed = seed;
  return c;
}

Scenario build_scenario(const RunConfig& c) {
  Scenario sc;
  sc.name = c.name;
  sc.ref = c.reference;
  sc.schedule = c.schedule;
  sc.horizon = c.horizon;
  sc.seed = c.seed;
  for (const AgentConfig& a : c.agents) {
    try {
      sc.agents.push_back(make_agent(a.name, a.model(), c.reference, c.mcai, a.x0, a.omega0));
    } catch (const Error& e) {
      throw Error(e.code(), a.name + ": " + e.what());
    }
  }
  return sc;
}

std::string trace_csv(const AgentTrace& trace) {
  if (trace.steps.empty()) return "";
  const StepRecord& s0 = trace.steps.front();
  auto names = [](const char* base, Eigen::Index count) {
    std::string h;
    for (Eigen::Index k = 0; k < count; ++k) {
      h += ",";
      h += base;
      if (count > 1 || base[0] == 'x' || base[0] == 'u') h += std::to_string(k + 1);
    }
    return h;
  };
  std::string out = "t" + names("x", s0.x.size()) + names("u", s0.u.size()) +
                    names("y", s0.y.size()) + names("y_r", s0.y_ref.size()) +
                    ",omega1,omega2,alpha1,alpha2,mu,gate,mode\n";
  auto put = [&out](const VectorXd& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) out += "," + format_double(v[k]);
  };
  for (const StepRecord& s : trace.steps) {
    out += std::to_string(s.t);
    put(s.x);
    put(s.u);
    put(s.y);
    put(s.y_ref);
    put(s.omega);
    put(s.alpha);
    out += "," + format_double(s.mu);
    out += s.gate ? ",1," : ",0,";
    out += csv_field(s.mode == Mode::kGovernor ? "governor" : "zero_input");
    out += "\n";
  }
  return out;
}

std::string metrics_json(const Scenario& sc, const SimTrace& trace, const Metrics& m) {
  Json j;
  j["scenario"] = trace.scenario;
  j["horizon"] = sc.horizon;
  j["passed"] = m.passed;
  j["final_z_spread"] = num_or_null(m.final_z_spread);
  j["spread_settled_step"] =
      m.spread_settled_step ? Json(*m.spread_settled_step) : Json(nullptr);
  j["consensus"] = m.consensus ? to_json(VectorXd(*m.consensus)) : Json(nullptr);
  j["consensus_in_intersection"] = m.consensus_in_intersection;
  j["a10_ok"] = m.a10_ok;
  j["final_alpha_spread"] = num_or_null(m.final_alpha_spread);
  Json agents = Json::array();
  for (std::size_t i = 0; i < m.agents.size(); ++i) {
    const AgentMetrics& a = m.agents[i];
    Json aj;
    aj["name"] = sc.agents[i].name;
    aj["t_star"] = sc.agents[i].set.t_star;
    aj["w2_interval"] = {trace.intervals[i].first, trace.intervals[i].second};
    aj["violations"] = a.violations;
    aj["max_constraint_margin"] = num_or_null(a.max_constraint_margin);
    aj["entry_step"] = a.entry_step ? Json(*a.entry_step) : Json(nullptr);
    aj["zero_input_prefix"] = a.zero_input_prefix;
    aj["t_f"] = a.t_f ? Json(*a.t_f) : Json(nullptr);
    aj["tracking_log_slope"] = num_or_null(a.tracking_log_slope);
    aj["state_log_slope"] = num_or_null(a.state_log_slope);
    aj["tail_start"] = a.tail_start;
    aj["tail_points"] = a.tail_points;
    aj["post_settle_error"] = num_or_null(a.post_settle_error);
    agents.push_back(std::move(aj));
  }
  j["agents"] = std::move(agents);
  j["diagnostics"] = trace.diagnostics;
  std::string out;
  pretty(j, 0, out);
  return out + "\n";
}

std::string svg_plot(std::string_view title, const std::vector<PlotSeries>& series,
                     const std::vector<double>& guides) {
  constexpr double kW = 720, kH = 420, kL = 70, kR = 130, kT = 40, kB = 50;
  double t0 = std::numeric_limits<double>::infinity(), t1 = -t0;
  double v0 = t0, v1 = -t0;
  for (const PlotSeries& s : series) {
    for (std::size_t k = 0; k < s.t.size(); ++k) {
      if (!std::isfinite(s.v[k])) continue;
      t0 = std::min(t0, s.t[k]);
      t1 = std::max(t1, s.t[k]);
      v0 = std::min(v0, s.v[k]);
      v1 = std::max(v1, s.v[k]);
    }
  }
  for (double g : guides) {
    v0 = std::min(v0, g);
    v1 = std::max(v1, g);
  }
  if (!std::isfinite(t0)) t0 = 0, t1 = 1, v0 = 0, v1 = 1;
  if (t1 <= t0) t1 = t0 + 1;
  if (v1 <= v0) v0 -= 1, v1 += 1;
  const double pad = 0.05 * (v1 - v0);
  v0 -= pad;
  v1 += pad;
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  auto X = [&](double t) { return kL + (t - t0) / (t1 - t0) * pw; };
  auto Y = [&](double v) { return kT + (v1 - v) / (v1 - v0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" viewBox=\"0 0 " << kW << " " << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << xml_escape(title) << "</text>\n";
  o << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double vs = nice_step(v1 - v0, 6);
  for (double v = std::ceil(v0 / vs) * vs; v <= v1; v += vs) {
    const double y = Y(v);
    o << "<line x1=\"" << kL - 4 << "\" y1=\"" << fixed(y, 2) << "\" x2=\"" << kL << "\" y2=\""
      << fixed(y, 2) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << kL - 7 << "\" y=\"" << fixed(y + 4, 2) << "\" text-anchor=\"end\">"
      << tick_label(std::abs(v) < vs * 1e-9 ? 0.0 : v) << "</text>\n";
  }
  const double ts = nice_step(t1 - t0, 8);
  for (double t = std::ceil(t0 / ts) * ts; t <= t1; t += ts) {
    const double x = X(t);
    o << "<line x1=\"" << fixed(x, 2) << "\" y1=\"" << kT + ph << "\" x2=\"" << fixed(x, 2)
      << "\" y2=\"" << kT + ph + 4 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fixed(x, 2) << "\" y=\"" << kT + ph + 18
      << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  o << "<text x=\"" << kL + pw / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\">t</text>\n";
  for (double g : guides) {
    o << "<line x1=\"" << kL << "\" y1=\"" << fixed(Y(g), 2) << "\" x2=\"" << kL + pw
      << "\" y2=\"" << fixed(Y(g), 2)
      << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    const PlotSeries& s = series[i];
    const char* color = kPalette[i % kPalette.size()];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.3\" points=\"";
    bool first = true;
    for (std::size_t k = 0; k < s.t.size(); ++k) {
      if (!std::isfinite(s.v[k])) continue;
      if (!first) o << ' ';
      first = false;
      o << fixed(X(s.t[k]), 2) << ',' << fixed(Y(s.v[k]), 2);
    }
    o << "\"/>\n";
    const double ly = kT + 10 + 18.0 * static_cast<double>(i);
    o << "<line x1=\"" << kL + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << kL + pw + 32
      << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << kL + pw + 38 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<std::pair<std::string, std::string>> figure_set(const Scenario& sc,
                                                            const SimTrace& trace) {
  std::vector<PlotSeries> y, yr, u;
  for (const AgentTrace& a : trace.agents) {
    PlotSeries sy{a.name, {}, {}}, sr{a.name, {}, {}}, su{a.name, {}, {}};
    for (const StepRecord& s : a.steps) {
      const double t = static_cast<double>(s.t);
      sy.t.push_back(t);
      sy.v.push_back(s.y[0]);
      sr.t.push_back(t);
      sr.v.push_back(s.y_ref[0]);
      su.t.push_back(t);
      su.v.push_back(s.u[0]);
    }
    y.push_back(std::move(sy));
    yr.push_back(std::move(sr));
    u.push_back(std::move(su));
  }
  std::vector<double> bounds;
  for (const AgentSetup& a : sc.agents) {
    const auto [lo, hi] = a.model.U.coordinate_bounds(0);
    for (double b : {lo, hi}) {
      if (std::isfinite(b) && std::find(bounds.begin(), bounds.end(), b) == bounds.end()) {
        bounds.push_back(b);
      }
    }
  }
  return {{"outputs.svg", svg_plot("outputs y_i(t)", y)},
          {"references.svg", svg_plot("references y^r_i(t)", yr)},
          {"inputs.svg", svg_plot("inputs u_i(t)", u, bounds)}};
}

}  // namespace imcons
