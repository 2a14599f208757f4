#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "syncnet/agents.hpp"
#include "syncnet/control.hpp"
#include "syncnet/exosystem.hpp"

namespace syncnet {

using VectorField = std::function<void(double t, std::span<const double> x, std::span<double> dx)>;

/// Classical four-stage Runge-Kutta with reusable stage buffers.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(std::size_t dim);
  /// Advances x in place from t to t + dt. Throws DivergenceError when a
  /// stage or the result is non-finite.
  void step(const VectorField& f, double t, double dt, std::span<double> x);

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

std::vector<double> rk4_step(const VectorField& f, std::span<const double> x, double t, double dt);

struct NodeSetup {
  AgentModel agent;
  std::vector<double> x0;
  Exosystem disturbance;
};

struct Scenario {
  std::string name;
  std::vector<NodeSetup> nodes;
  ControllerConfig controller;
  double t_end = 200.0;
  double dt = 1e-3;
  std::size_t sample_every = 1;
  bool record_states = false;
  bool track_average = false;             // record (1/N) 1^T phi(t) as target
  std::optional<double> gamma4_override;  // Goodwin IOFP diagnostic only

  std::size_t size() const noexcept { return nodes.size(); }
  void validate() const;
};

struct Trace {
  std::size_t n_nodes = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> y;    // [node][sample]
  std::vector<std::vector<double>> phi;  // [node][sample]
  std::vector<std::vector<double>> eta;  // [node][sample]
  std::vector<std::vector<double>> x;    // [sample][state], only with record_states
  std::vector<std::string> weight_labels;
  std::vector<std::vector<double>> weights;  // [edge][sample], adaptive mode
  std::vector<double> target;                // with track_average
  std::vector<std::string> diagnostics;
};

struct SyncConditionReport {
  bool applicable = false;  // Goodwin agents only
  double gamma = 0.0;
  double gamma4 = 0.0;
  double mu2 = 0.0;
  bool holds = false;
};

/// gamma + mu2 > 0 for homogeneous Goodwin networks (mu2 of the initial L_p).
SyncConditionReport synchronization_check(const Scenario& scenario);

/// Signals of the closed loop at one instant.
struct LoopSnapshot {
  Vector y, phi, eta, u, coupling;
};

/// Closed-loop vector field: agents, internal models and adaptive weights on
/// one state vector, with disturbances evaluated in closed form.
class ClosedLoop {
 public:
  explicit ClosedLoop(const Scenario& scenario);

  std::size_t dimension() const noexcept { return dim_; }
  std::vector<double> initial_state() const;
  void rhs(double t, std::span<const double> x, std::span<double> dx) const;
  LoopSnapshot observe(double t, std::span<const double> x) const;

  std::size_t agent_offset(std::size_t node) const { return agent_off_[node]; }
  /// Offset of zeta_i, or npos when node i carries no internal model.
  std::size_t zeta_offset(std::size_t node) const { return zeta_off_[node]; }
  std::size_t weights_offset() const noexcept { return weights_off_; }
  std::size_t node_of_state(std::size_t index) const;
  std::vector<std::string> weight_labels() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  void signals(double t, std::span<const double> x, std::span<double> y, std::span<double> phi,
               std::span<double> eta, std::span<double> u, std::span<double> coupling) const;

  Scenario scenario_;
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::size_t im_order_ = 0;
  std::vector<std::size_t> agent_off_;
  std::vector<std::size_t> zeta_off_;
  std::vector<Vector> b_;
  std::size_t weights_off_ = 0;
  std::size_t n_p_weights_ = 0;
  std::size_t n_n_weights_ = 0;
  bool adaptive_ = false;
  bool shared_weights_ = false;

  // Per-call scratch; a ClosedLoop instance is not meant for concurrent rhs calls.
  mutable std::vector<double> y_, phi_, eta_, u_, coupling_, lpy_, lieta_;
};

/// Integrates the scenario on a fixed RK4 grid. Aborts with DivergenceError
/// when any state exceeds 1e9 in magnitude or becomes non-finite.
Trace simulate(const Scenario& scenario);

struct SyncError {
  std::vector<double> series;  // max_i |y_i - mean(y)|
  double summary = 0.0;        // max over the trailing window
};

/// Indices of samples in the trailing `window_fraction` of the horizon.
std::pair<std::size_t, std::size_t> trailing_window(const Trace& trace, double window_fraction);

SyncError sync_error(const Trace& trace, double window_fraction = 0.2);

/// max_i |y_i(t) - target(t)| over the trailing window.
double tracking_error(const Trace& trace, std::span<const double> target, double window_fraction = 0.2);

std::vector<double> average_input(const Trace& trace);
std::vector<double> mean_output(const Trace& trace);
double window_peak_to_peak(const Trace& trace, std::span<const double> series, double window_fraction = 0.2);

/// CSV with header t, y_1..y_N, phi_1..phi_N, eta_1..eta_N, sync_err and
/// optional weight and target columns; 17 significant digits.
void write_csv(const Trace& trace, std::ostream& os);
Trace read_csv(std::istream& is);

}  // namespace syncnet
