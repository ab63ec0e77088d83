#include "imcons/scenario.hpp"

#include <random>

#include "imcons/error.hpp"

namespace imcons {

namespace {

MatrixXd mat3(std::initializer_list<double> v) {
  MatrixXd m(3, 3);
  auto it = v.begin();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = *it++;
  }
  return m;
}

MatrixXd col3(double a, double b, double c) {
  MatrixXd m(3, 1);
  m << a, b, c;
  return m;
}

MatrixXd row3(double a, double b, double c) {
  MatrixXd m(1, 3);
  m << a, b, c;
  return m;
}

AgentModel agent(MatrixXd A, MatrixXd B, MatrixXd K) {
  AgentModel m;
  m.A = std::move(A);
  m.B = std::move(B);
  m.C = row3(1, 0, 0);
  m.U = HPolytope::box(VectorXd::Constant(1, -1.0), VectorXd::Constant(1, 1.0));
  m.K = std::move(K);
  return m;
}

}  // namespace

std::vector<AgentModel> paper_agents() {
  return {
      agent(mat3({1, 0.3548, 0.0594, 0, 0.8812, 0.2954, 0, -0.5908, 0.5858}),
            col3(0.0076, 0.0594, 0.2954), row3(-2.3923, -4.99, -4.4074)),
      agent(mat3({1, 0.3538, 0.0263, 0, 0.8946, 0.09, 0, -0.3614, -0.0089}),
            col3(0.0081, 0.0527, 0.1951), row3(-3.8504, -8.9397, -2.9527)),
      agent(mat3({1, 0.3036, 0.0487, 0, 0.5134, 0.2062, 0, -2.0623, 0.1009}),
            col3(0.0066, 0.0487, 0.2062), row3(-3.1011, 0.9655, -3.8339)),
      agent(mat3({1, 0.363, 0.0537, 0, 0.9463, 0.2556, 0, -0.2556, 0.4352}),
            col3(0.007, 0.0537, 0.2556), row3(-2.7975, -7.1542, -4.4122)),
  };
}

GraphSchedule paper_schedule() {
  GraphSchedule s;
  // G1: agent 2 hears 3; G2: 3 hears 4; G3: 4 hears 1; G4: 1 hears 2
  // (1-based), each with weight 0.4 and self weight 0.6.
  const int pairs[4][2] = {{1, 2}, {2, 3}, {3, 0}, {0, 1}};
  for (const auto& p : pairs) {
    s.graphs.push_back(Digraph{4, {Edge{p[0], p[1], 0.4}}});
  }
  s.sequence = {0, 1, 2, 3};
  s.dwell = 1;
  s.window = 4;
  s.weight_floor = 0.1;
  return s;
}

ReferenceModel paper_reference() {
  ReferenceModel r;
  r.h = kPaperStep;
  r.Q.resize(1, 2);
  r.Q << 1.0, 0.0;
  return r;
}

PaperInitialConditions paper_initial_conditions(int variant) {
  PaperInitialConditions ic;
  auto v3 = [](double a, double b, double c) {
    VectorXd v(3);
    v << a, b, c;
    return v;
  };
  ic.x0 = {v3(23, -0.5, -0.2), v3(22, -0.3, -0.1), v3(35, -0.3, 0.22),
           v3(54.5327, -33.0192, 28.2356)};
  ic.omega0 = {Vector2d(32.4774, 0.3968), Vector2d(9.4451, 0.4),
               Vector2d(28.9, 0.0793), Vector2d(42.6538, 0.8)};
  if (variant == 2) {
    ic.x0[2] = v3(47, -45, -32);
  } else if (variant != 1) {
    throw Error(ErrorCode::kConfig, "initial-condition variant must be 1 or 2");
  }
  return ic;
}

Scenario paper_scenario(const std::string& name, const McaiOptions& opts,
                        long horizon) {
  int variant = 0;
  if (name == "paper-s1") {
    variant = 1;
  } else if (name == "paper-s2") {
    variant = 2;
  } else {
    throw Error(ErrorCode::kConfig,
                "unknown scenario '" + name + "' (expected paper-s1 or paper-s2)");
  }
  Scenario sc;
  sc.name = name;
  sc.ref = paper_reference();
  sc.schedule = paper_schedule();
  sc.horizon = horizon;
  const auto ic = paper_initial_conditions(variant);
  auto models = paper_agents();
  for (std::size_t i = 0; i < models.size(); ++i) {
    sc.agents.push_back(make_agent("agent" + std::to_string(i + 1),
                                   std::move(models[i]), sc.ref, opts,
                                   ic.x0[i], ic.omega0[i]));
  }
  return sc;
}

Scenario perturbed_paper_scenario(std::uint64_t seed, const McaiOptions& opts,
                                  long horizon) {
  Scenario sc = paper_scenario("paper-s1", opts, horizon);
  sc.name = "paper-s1-perturbed-" + std::to_string(seed);
  sc.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& a : sc.agents) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      VectorXd x = a.x0;
      x[0] += 20.0 * noise(rng);
      for (Eigen::Index k = 1; k < x.size(); ++k) x[k] += 0.5 * noise(rng);
      if (x_in_Xinf(a.set, x)) {
        a.x0 = x;
        break;
      }
    }
    a.omega0 = Vector2d(a.omega0[0] + 20.0 * (unit(rng) - 0.5),
                        2.0 * unit(rng) - 1.0);
  }
  for (auto& g : sc.schedule.graphs) {
    for (auto& e : g.edges) {
      e.weight = sc.schedule.weight_floor + 0.05 +
                 (0.9 - sc.schedule.weight_floor - 0.05) * unit(rng);
    }
  }
  return sc;
}

}  // namespace imcons
