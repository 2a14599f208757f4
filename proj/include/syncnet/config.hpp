#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "syncnet/agents.hpp"
#include "syncnet/control.hpp"
#include "syncnet/exosystem.hpp"
#include "syncnet/sim.hpp"

namespace syncnet {

// In-memory form of a scenario file. Node indices are zero-based here and
// one-based in the file. See docs/scenario.md for the schema.

struct DisturbanceConfig {
  double constant = 0.0;
  std::vector<Sinusoid> sinusoids;

  ExoSpec spec() const;
  friend bool operator==(const DisturbanceConfig&, const DisturbanceConfig&) = default;
};

struct AgentConfig {
  std::string type = "goodwin";  // "goodwin" | "linear"
  GoodwinParams goodwin;
  std::optional<double> gamma4;
  std::vector<double> num;  // ascending, linear agents
  std::vector<double> den;

  friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

struct EdgeConfig {
  std::size_t i = 0;
  std::size_t j = 0;
  double p = 1.0;
  double n = 1.0;

  friend bool operator==(const EdgeConfig&, const EdgeConfig&) = default;
};

struct EdgeGain {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;

  friend bool operator==(const EdgeGain&, const EdgeGain&) = default;
};

struct AdaptationConfig {
  double alpha = 1.0;
  double beta = 1.0;
  std::vector<EdgeGain> alpha_edges;  // per-edge overrides
  std::vector<EdgeGain> beta_edges;

  friend bool operator==(const AdaptationConfig&, const AdaptationConfig&) = default;
};

struct ControllerSection {
  ControlMode mode = ControlMode::none;
  std::size_t leader = 0;
  std::optional<ExoSpec> internal_model;
  std::vector<std::vector<double>> b;
  std::vector<std::vector<double>> zeta0;
  std::optional<AdaptationConfig> adaptation;

  friend bool operator==(const ControllerSection&, const ControllerSection&) = default;
};

struct NodeConfig {
  std::vector<double> x0;
  DisturbanceConfig disturbance;

  friend bool operator==(const NodeConfig&, const NodeConfig&) = default;
};

struct DacConfig {
  bool constant = true;
  std::vector<double> omegas;
  std::optional<double> epsilon;  // auto when absent
  double nh_root = 0.4;

  ExoSpec spec() const { return {constant, omegas}; }
  friend bool operator==(const DacConfig&, const DacConfig&) = default;
};

/// Acceptance metric attached to a preset.
struct CheckConfig {
  std::string metric = "sync_error";  // sync_error | tracking_error | input_exactness
  std::string compare = "<=";         // <= | >
  double threshold = 0.0;
  bool relative_to_input_p2p = false;  // threshold scales with p2p of the input average
  std::string oscillation_reference;   // preset id whose mean-output p2p is the reference
  double oscillation_ratio = 0.0;

  friend bool operator==(const CheckConfig&, const CheckConfig&) = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::string description;
  double t_end = 200.0;
  double dt = 1e-3;
  std::size_t sample_every = 1;
  double window_fraction = 0.2;
  bool record_states = false;
  std::optional<AgentConfig> agent;  // required unless dac is present
  std::size_t nodes = 0;
  std::vector<EdgeConfig> edges;
  ControllerSection controller;
  std::vector<NodeConfig> node_list;
  std::optional<DacConfig> dac;
  std::optional<CheckConfig> check;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses and validates a scenario document. Throws ConfigError listing
/// every violation with its field path.
ScenarioConfig parse_config(std::string_view toml_text);
ScenarioConfig load_config(const std::string& path);

std::string to_toml(const ScenarioConfig& config);

WeightedGraph p_graph_of(const ScenarioConfig& config);
WeightedGraph n_graph_of(const ScenarioConfig& config);

/// Builds the runnable scenario (designs the estimator for dac configs).
Scenario build_scenario(const ScenarioConfig& config);

}  // namespace syncnet
