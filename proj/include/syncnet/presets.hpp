#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "syncnet/config.hpp"
#include "syncnet/sim.hpp"

namespace syncnet {

std::vector<std::string> preset_ids();
std::string preset_source(std::string_view id);
ScenarioConfig load_preset(std::string_view id);

struct CheckResult {
  bool pass = false;
  std::string metric;
  std::string compare;
  double value = 0.0;
  double threshold = 0.0;
  std::optional<double> oscillation;            // mean-output p2p, when checked
  std::optional<double> oscillation_threshold;
  std::string detail;
};

/// Evaluates `config.check` on a finished trace. `reference` is the trace of
/// the oscillation reference preset, when the check names one.
CheckResult evaluate_check(const ScenarioConfig& config, const Trace& trace, const Trace* reference = nullptr);

struct ReproduceResult {
  std::string id;
  ScenarioConfig config;
  Trace trace;
  CheckResult check;
  double seconds = 0.0;
};

ReproduceResult reproduce(std::string_view id);

}  // namespace syncnet
