#include "syncnet/presets.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace syncnet {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& preset_sources();
}

std::vector<std::string> preset_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, text] : detail::preset_sources()) ids.emplace_back(id);
  return ids;
}

std::string preset_source(std::string_view id) {
  for (const auto& [key, text] : detail::preset_sources())
    if (key == id) return std::string(text);
  std::string known;
  for (const auto& k : preset_ids()) known += (known.empty() ? "" : ", ") + k;
  throw std::invalid_argument("unknown preset '" + std::string(id) + "' (known: " + known + ")");
}

ScenarioConfig load_preset(std::string_view id) { return parse_config(preset_source(id)); }

namespace {

double input_exactness(const ScenarioConfig& config, const Trace& trace) {
  double worst = 0.0;
  for (std::size_t i = 0; i < trace.n_nodes; ++i) {
    const auto& d = config.node_list[i].disturbance;
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
      const double t = trace.times[k];
      double expected = d.constant;
      for (const auto& s : d.sinusoids) expected += s.amplitude * std::cos(s.omega * t + s.phase);
      worst = std::max(worst, std::abs(trace.phi[i][k] - expected));
    }
  }
  return worst;
}

}  // namespace

CheckResult evaluate_check(const ScenarioConfig& config, const Trace& trace, const Trace* reference) {
  if (!config.check) throw std::invalid_argument("scenario has no [check] section");
  const auto& ch = *config.check;
  CheckResult r;
  r.metric = ch.metric;
  r.compare = ch.compare;
  r.threshold = ch.threshold;
  const double w = config.window_fraction;

  std::ostringstream detail;
  if (ch.metric == "sync_error") {
    r.value = sync_error(trace, w).summary;
  } else if (ch.metric == "tracking_error") {
    r.value = tracking_error(trace, trace.target, w);
  } else {
    r.value = input_exactness(config, trace);
    const auto avg = average_input(trace);
    const double p2p = window_peak_to_peak(trace, avg, w);
    detail << "average input p2p " << p2p << "; ";
    if (!(p2p > 0.0)) {
      r.detail = detail.str() + "average input is constant";
      return r;
    }
  }
  if (ch.relative_to_input_p2p) {
    const auto avg = average_input(trace);
    const double p2p = window_peak_to_peak(trace, avg, w);
    r.threshold = ch.threshold * p2p;
    detail << "threshold " << ch.threshold << " x input p2p " << p2p << "; ";
  }
  r.pass = ch.compare == "<=" ? r.value <= r.threshold : r.value > r.threshold;

  if (!ch.oscillation_reference.empty()) {
    if (!reference) throw std::invalid_argument("oscillation check needs the reference trace");
    const auto own = mean_output(trace);
    const auto ref = mean_output(*reference);
    r.oscillation = window_peak_to_peak(trace, own, w);
    r.oscillation_threshold = ch.oscillation_ratio * window_peak_to_peak(*reference, ref, w);
    detail << "mean-output p2p " << *r.oscillation << " vs " << *r.oscillation_threshold << " ("
           << ch.oscillation_ratio << " x " << ch.oscillation_reference << "); ";
    r.pass = r.pass && *r.oscillation >= *r.oscillation_threshold;
  }
  r.detail = detail.str();
  return r;
}

ReproduceResult reproduce(std::string_view id) {
  const auto start = std::chrono::steady_clock::now();
  ReproduceResult res;
  res.id = std::string(id);
  res.config = load_preset(id);
  res.trace = simulate(build_scenario(res.config));
  std::optional<Trace> reference;
  if (res.config.check && !res.config.check->oscillation_reference.empty())
    reference = simulate(build_scenario(load_preset(res.config.check->oscillation_reference)));
  res.check = evaluate_check(res.config, res.trace, reference ? &*reference : nullptr);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace syncnet
