#include "syncnet/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "syncnet/errors.hpp"

namespace syncnet {

std::string format_number(double v, int digits) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

GraphPair parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::size_t declared = 0;
  std::size_t max_node = 0;
  struct Row {
    std::size_t i, j;
    double p, n;
  };
  std::vector<Row> rows;
  std::vector<std::string> errors;

  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";

    auto to_double = [&](const std::string& s, double& out) {
      std::size_t used = 0;
      try {
        out = std::stod(s, &used);
      } catch (const std::exception&) {
        return false;
      }
      return used == s.size() && std::isfinite(out);
    };
    auto to_index = [&](const std::string& s, std::size_t& out) {
      double v = 0.0;
      if (!to_double(s, v) || v < 1 || v != std::floor(v)) return false;
      out = static_cast<std::size_t>(v);
      return true;
    };

    if (tok[0] == "nodes") {
      if (tok.size() != 2 || !to_index(tok[1], declared)) errors.push_back(where + "expected 'nodes N'");
      continue;
    }
    if (tok.size() < 2 || tok.size() > 4) {
      errors.push_back(where + "expected 'i j [p_weight [n_weight]]'");
      continue;
    }
    Row r{0, 0, 1.0, 1.0};
    if (!to_index(tok[0], r.i) || !to_index(tok[1], r.j)) {
      errors.push_back(where + "node indices must be positive integers");
      continue;
    }
    if (tok.size() >= 3 && !to_double(tok[2], r.p)) {
      errors.push_back(where + "bad weight '" + tok[2] + "'");
      continue;
    }
    r.n = r.p;
    if (tok.size() == 4 && !to_double(tok[3], r.n)) {
      errors.push_back(where + "bad weight '" + tok[3] + "'");
      continue;
    }
    if (r.p < 0.0 || r.n < 0.0) {
      errors.push_back(where + "weights must be nonnegative");
      continue;
    }
    if (r.i == r.j) {
      errors.push_back(where + "self-loop");
      continue;
    }
    max_node = std::max({max_node, r.i, r.j});
    rows.push_back(r);
  }

  const std::size_t n = declared ? declared : max_node;
  if (declared && max_node > declared)
    errors.push_back("node index " + std::to_string(max_node) + " exceeds declared 'nodes " +
                     std::to_string(declared) + "'");
  if (n == 0 && errors.empty()) errors.push_back("edge list is empty");
  if (!errors.empty()) throw ConfigError(std::move(errors));

  std::vector<Edge> p_edges, n_edges;
  for (const auto& r : rows) {
    p_edges.push_back({r.i - 1, r.j - 1, r.p});
    n_edges.push_back({r.i - 1, r.j - 1, r.n});
  }
  try {
    return {WeightedGraph(n, std::move(p_edges)), WeightedGraph(n, std::move(n_edges))};
  } catch (const GraphError& e) {
    throw ConfigError({e.what()});
  }
}

namespace {

void print_matrix(std::ostream& os, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << "  ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%9.4g", std::abs(m(r, c)) < 1e-12 ? 0.0 : m(r, c));
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace

std::string graph_report(const GraphPair& graphs, const std::optional<GoodwinParams>& agent,
                         std::optional<double> gamma4) {
  std::ostringstream os;
  const auto l_p = build_laplacian(graphs.p);
  const auto l_i = build_laplacian(graphs.n);
  os << "nodes: " << graphs.p.size() << ", edges: " << graphs.p.edges().size() << '\n';
  os << "L_p:\n";
  print_matrix(os, l_p.matrix());
  os << "L_I:\n";
  print_matrix(os, l_i.matrix());

  const std::size_t n = graphs.p.size();
  const double mu_p = n >= 2 ? mu2(l_p) : 0.0;
  const double mu_i = n >= 2 ? mu2(l_i) : 0.0;
  os << "μ2(L_p) = " << format_number(mu_p) << ", connected: " << (n >= 2 && is_connected(l_p) ? "yes" : "no")
     << '\n';
  os << "μ2(L_I) = " << format_number(mu_i) << ", connected: " << (n >= 2 && is_connected(l_i) ? "yes" : "no")
     << '\n';

  if (agent) {
    const double g4 = gamma4 ? *gamma4 : hill_max_slope(agent->hill_p);
    const double gamma = goodwin_iofp_gamma(*agent, g4);
    os << "γ4 = " << format_number(g4) << (gamma4 ? " (given)" : " (max Hill slope)") << '\n';
    os << "γ = " << format_number(gamma) << ", μ2 = " << format_number(mu_p) << ", condition "
       << (synchronization_condition(gamma, mu_p) ? "HOLDS" : "FAILS") << '\n';
  }
  return os.str();
}

std::string run_summary(const ScenarioConfig& config, const Scenario& scenario, const Trace& trace) {
  auto metric = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "scenario: " << config.name << '\n';
  if (!config.description.empty()) os << "description: " << config.description << '\n';
  os << "mode: " << to_string(scenario.controller.mode) << '\n';
  os << "nodes: " << scenario.size() << '\n';
  os << "t_end: " << format_number(scenario.t_end) << ", dt: " << format_number(scenario.dt)
     << ", samples: " << trace.times.size() << '\n';

  const auto se = sync_error(trace, config.window_fraction);
  os << "window_fraction: " << format_number(config.window_fraction) << '\n';
  os << "sync_error: " << metric(se.summary) << '\n';
  const auto avg = mean_output(trace);
  os << "mean_output_p2p: " << format_number(window_peak_to_peak(trace, avg, config.window_fraction)) << '\n';
  if (!trace.target.empty()) {
    const double p2p = window_peak_to_peak(trace, trace.target, config.window_fraction);
    os << "tracking_error: " << metric(tracking_error(trace, trace.target, config.window_fraction)) << '\n';
    os << "input_average_p2p: " << format_number(p2p) << '\n';
  }

  const auto cond = synchronization_check(scenario);
  if (cond.applicable) {
    os << "gamma4: " << format_number(cond.gamma4) << '\n';
    os << "gamma: " << format_number(cond.gamma) << '\n';
    os << "mu2: " << format_number(cond.mu2) << '\n';
    os << "condition gamma + mu2 > 0: " << (cond.holds ? "HOLDS" : "FAILS") << '\n';
  } else if (scenario.size() >= 2) {
    os << "mu2: " << format_number(mu2(build_laplacian(scenario.controller.p_graph))) << '\n';
  }
  for (const auto& d : trace.diagnostics) os << "diagnostic: " << d << '\n';
  return os.str();
}

}  // namespace syncnet
