#include "imcons/network.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "imcons/error.hpp"
#include "imcons/format.hpp"

namespace imcons {

MatrixXd perron(const Digraph& g) {
  MatrixXd P = MatrixXd::Identity(g.nodes, g.nodes);
  for (const Edge& e : g.edges) {
    if (e.agent < 0 || e.agent >= g.nodes || e.neighbor < 0 ||
        e.neighbor >= g.nodes) {
      throw Error(ErrorCode::kConfig, "edge endpoint out of range");
    }
    if (e.agent == e.neighbor) continue;
    P(e.agent, e.neighbor) += e.weight;
    P(e.agent, e.agent) -= e.weight;
  }
  for (int i = 0; i < g.nodes; ++i) {
    if (P(i, i) < -1e-15) {
      throw Error(ErrorCode::kNegativeDiagonal,
                  "weights of agent " + std::to_string(i) + " sum to " +
                      format_double(1.0 - P(i, i)));
    }
  }
  return P;
}

const Digraph& GraphSchedule::at(long t) const {
  const long k = (t / dwell) % static_cast<long>(sequence.size());
  return graphs[static_cast<std::size_t>(sequence[static_cast<std::size_t>(k)])];
}

void GraphSchedule::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::kConfig, m); };
  if (graphs.empty() || sequence.empty()) fail("schedule needs graphs and a sequence");
  if (dwell < 1) fail("dwell must be >= 1");
  if (window < 0) fail("window must be >= 0");
  if (!(weight_floor > 0.0)) fail("weight floor must be positive");
  const int n = graphs.front().nodes;
  if (n < 1) fail("graphs need at least one node");
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const Digraph& g = graphs[k];
    if (g.nodes != n) fail("graph " + std::to_string(k) + " has a different node count");
    for (const Edge& e : g.edges) {
      if (e.agent < 0 || e.agent >= n || e.neighbor < 0 || e.neighbor >= n) {
        fail("graph " + std::to_string(k) + ": edge endpoint out of range");
      }
      if (e.agent == e.neighbor) fail("graph " + std::to_string(k) + ": self-loop");
      if (!(e.weight > weight_floor && e.weight <= 1.0)) {
        fail("graph " + std::to_string(k) + ": weight " +
             format_double(e.weight) + " outside (" +
             format_double(weight_floor) + ", 1]");
      }
    }
    try {
      perron(g);
    } catch (const Error& e) {
      fail("graph " + std::to_string(k) + ": " + e.what());
    }
  }
  for (int s : sequence) {
    if (s < 0 || s >= static_cast<int>(graphs.size())) fail("sequence index out of range");
  }
}

bool strongly_connected(int nodes,
                        const std::vector<std::pair<int, int>>& edges) {
  if (nodes <= 1) return true;
  // Reachability from node 0 along edges and along reversed edges.
  auto reach_all = [&](bool reversed) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
    for (auto [a, b] : edges) {
      // Information flows from neighbor b to agent a.
      if (reversed) {
        adj[a].push_back(b);
      } else {
        adj[b].push_back(a);
      }
    }
    std::vector<bool> seen(static_cast<std::size_t>(nodes), false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reach_all(false) && reach_all(true);
}

ConnectivityReport check_uniform_connectivity(const GraphSchedule& sched) {
  ConnectivityReport rep;
  rep.connected = true;
  const int n = sched.nodes();
  for (long start = 0; start < std::max(1L, sched.period()); ++start) {
    std::set<std::pair<int, int>> uni;
    for (long t = start; t <= start + sched.window; ++t) {
      for (const Edge& e : sched.at(t).edges) {
        if (e.agent != e.neighbor && e.weight > 0.0) uni.insert({e.agent, e.neighbor});
      }
    }
    std::vector<std::pair<int, int>> edges(uni.begin(), uni.end());
    const bool ok = strongly_connected(n, edges);
    if (start == 0) rep.union_edges = edges;
    if (!ok) {
      rep.connected = false;
      rep.failing_start = start;
      rep.union_edges = edges;
      break;
    }
  }
  return rep;
}

std::optional<Interval> intersect(const std::vector<Interval>& intervals) {
  Interval out{-std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity()};
  for (const auto& [lo, hi] : intervals) {
    out.first = std::max(out.first, lo);
    out.second = std::min(out.second, hi);
  }
  if (out.first > out.second) return std::nullopt;
  return out;
}

std::vector<Vector2d> consensus_step(const std::vector<Vector2d>& omega,
                                     const Digraph& g, double h,
                                     const std::vector<Interval>& intervals) {
  const auto n = omega.size();
  if (static_cast<int>(n) != g.nodes || intervals.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "consensus step needs one omega and one interval per node");
  }
  std::vector<Vector2d> mixed = omega;
  for (const Edge& e : g.edges) {
    if (e.agent == e.neighbor) continue;
    mixed[e.agent] += e.weight * (omega[e.neighbor] - omega[e.agent]);
  }
  std::vector<Vector2d> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [lo, hi] = intervals[i];
    if (lo > hi) {
      throw Error(ErrorCode::kEmptyInterval,
                  "agent " + std::to_string(i) + " has an empty interval");
    }
    Vector2d v(mixed[i][0] + h * mixed[i][1], mixed[i][1]);
    v[1] = std::clamp(v[1], lo, hi);
    out[i] = v;
  }
  return out;
}

std::vector<Vector2d> to_z_frame(const std::vector<Vector2d>& omega, double h,
                                 long t) {
  std::vector<Vector2d> z;
  z.reserve(omega.size());
  const double ht = h * static_cast<double>(t);
  for (const auto& w : omega) z.emplace_back(w[0] - ht * w[1], w[1]);
  return z;
}

double z_spread(const std::vector<Vector2d>& omega, double h, long t) {
  const auto z = to_z_frame(omega, h, t);
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      s = std::max(s, (z[i] - z[j]).norm());
    }
  }
  return s;
}

Vector2d consensus_value_estimate(const std::vector<Vector2d>& omega, double h,
                                  long t, double tol) {
  if (omega.empty()) throw Error(ErrorCode::kNotConverged, "no agents");
  const double spread = z_spread(omega, h, t);
  if (!(spread <= tol)) {
    throw Error(ErrorCode::kNotConverged,
                "z-frame spread " + format_double(spread) + " exceeds " +
                    format_double(tol));
  }
  Vector2d mean = Vector2d::Zero();
  for (const auto& z : to_z_frame(omega, h, t)) mean += z;
  return mean / static_cast<double>(omega.size());
}

}  // namespace imcons
