#pragma once

#include <vector>

#include "syncnet/sim.hpp"

namespace fixture {

inline const std::vector<std::vector<double>>& goodwin_x0() {
  static const std::vector<std::vector<double>> x0 = {
      {0.1, 0.3, 0.9}, {0.6, 1.2, 0.2}, {1.0, 0.5, 0.7}, {1.2, 0.9, 0.3}};
  return x0;
}

/// Four Goodwin oscillators on a unit-weight cycle with constant disturbances.
inline syncnet::Scenario goodwin_cycle(syncnet::ControlMode mode, std::vector<double> phi, double t_end = 200.0,
                                       double dt = 1e-3) {
  using namespace syncnet;
  const ExoSpec spec{true, {}};
  Scenario sc;
  sc.name = "goodwin";
  sc.t_end = t_end;
  sc.dt = dt;
  for (std::size_t i = 0; i < 4; ++i) {
    Vector xi(1);
    xi(0) = phi[i];
    sc.nodes.push_back({AgentModel::goodwin({0.5, 0.5, 0.5, 20.0}), goodwin_x0()[i], Exosystem(spec, xi)});
  }
  sc.controller.mode = mode;
  sc.controller.p_graph = WeightedGraph::cycle(4);
  sc.controller.n_graph = WeightedGraph::cycle(4);
  sc.controller.internal_model = spec;
  sc.gamma4_override = 5.0;
  return sc;
}

}  // namespace fixture
