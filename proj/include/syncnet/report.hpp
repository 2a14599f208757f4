#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "syncnet/agents.hpp"
#include "syncnet/config.hpp"
#include "syncnet/netgraph.hpp"
#include "syncnet/sim.hpp"

namespace syncnet {

/// Proportional and internal-model graphs over the same node set.
struct GraphPair {
  WeightedGraph p;
  WeightedGraph n;
};

/// Edge-list text: optional `nodes N` line, then `i j [p [n]]` per edge
/// (one-based, weights default to 1, n defaults to p). `#` starts a comment.
/// Errors carry the offending line number.
GraphPair parse_edge_list(std::string_view text);

/// Laplacians, mu2 and connectivity; with `agent` also gamma and the
/// condition gamma + mu2 > 0.
std::string graph_report(const GraphPair& graphs, const std::optional<GoodwinParams>& agent,
                         std::optional<double> gamma4);

/// Plain-text run summary written next to trace.csv.
std::string run_summary(const ScenarioConfig& config, const Scenario& scenario, const Trace& trace);

/// Fixed-precision number for reports; tiny magnitudes print as 0.
std::string format_number(double v, int digits = 6);

}  // namespace syncnet
