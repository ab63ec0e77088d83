#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "imcons/numerics.hpp"

namespace imcons {

/// `agent` receives from `neighbor` with weight a_ij.
struct Edge {
  int agent = 0;
  int neighbor = 0;
  double weight = 0.0;
};

struct Digraph {
  int nodes = 0;
  std::vector<Edge> edges;
};

/// Row-stochastic weight matrix: P_ij = a_ij on edges, P_ii = 1 − Σ_j a_ij.
/// Throws kNegativeDiagonal when the weights of a row exceed 1.
MatrixXd perron(const Digraph& g);

/// Cyclic switching: graph sequence[k] is active for `dwell` consecutive
/// steps, and the sequence repeats.
struct GraphSchedule {
  std::vector<Digraph> graphs;
  std::vector<int> sequence;
  int dwell = 1;
  /// Window length T: the union over [t, t + T] must be strongly connected.
  int window = 1;
  double weight_floor = 0.1;

  int nodes() const { return graphs.empty() ? 0 : graphs.front().nodes; }
  long period() const { return static_cast<long>(sequence.size()) * dwell; }
  const Digraph& at(long t) const;

  /// Throws kConfig on malformed schedules (weights outside (ā, 1],
  /// self-loops, index errors, negative Perron diagonals).
  void validate() const;
};

struct ConnectivityReport {
  bool connected = false;
  /// First window start whose union is not strongly connected, or -1.
  long failing_start = -1;
  /// Edge list (agent, neighbor) of the union over the first failing window,
  /// or over the window starting at 0 when everything passes.
  std::vector<std::pair<int, int>> union_edges;
};

bool strongly_connected(int nodes, const std::vector<std::pair<int, int>>& edges);

ConnectivityReport check_uniform_connectivity(const GraphSchedule& sched);

using Interval = std::pair<double, double>;

/// Intersection of all intervals, nullopt if empty.
std::optional<Interval> intersect(const std::vector<Interval>& intervals);

/// ωᵢ⁺ = Proj_{Wᵢ}(S(ωᵢ + Σⱼ a_ij (ωⱼ − ωᵢ))); the projection clamps ω².
std::vector<Vector2d> consensus_step(const std::vector<Vector2d>& omega,
                                     const Digraph& g, double h,
                                     const std::vector<Interval>& intervals);

/// zᵢ = S^{−t} ωᵢ.
std::vector<Vector2d> to_z_frame(const std::vector<Vector2d>& omega, double h,
                                 long t);

/// max_{i,j} ‖zᵢ − zⱼ‖₂.
double z_spread(const std::vector<Vector2d>& omega, double h, long t);

/// Common z-frame value (mean of zᵢ). Throws kNotConverged if the spread
/// exceeds `tol`.
Vector2d consensus_value_estimate(const std::vector<Vector2d>& omega, double h,
                                  long t, double tol = 1e-6);

}  // namespace imcons
