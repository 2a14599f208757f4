#include "syncnet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "syncnet/errors.hpp"
#include "syncnet/netgraph.hpp"

namespace syncnet {

// ---------------------------------------------------------------------------
// RK4

Rk4Stepper::Rk4Stepper(std::size_t dim) : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

namespace {

void require_finite(std::span<const double> v, double t) {
  for (double x : v)
    if (!std::isfinite(x)) throw DivergenceError("divergence at t = " + std::to_string(t) + ": non-finite state", t);
}

}  // namespace

void Rk4Stepper::step(const VectorField& f, double t, double dt, std::span<double> x) {
  const std::size_t n = x.size();
  const double half = 0.5 * dt;

  f(t, x, k1_);
  require_finite(k1_, t);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + half * k1_[i];
  f(t + half, tmp_, k2_);
  require_finite(k2_, t + half);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + half * k2_[i];
  f(t + half, tmp_, k3_);
  require_finite(k3_, t + half);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + dt * k3_[i];
  f(t + dt, tmp_, k4_);
  require_finite(k4_, t + dt);
  for (std::size_t i = 0; i < n; ++i) x[i] += dt / 6.0 * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
  require_finite(x, t + dt);
}

std::vector<double> rk4_step(const VectorField& f, std::span<const double> x, double t, double dt) {
  std::vector<double> out(x.begin(), x.end());
  Rk4Stepper(x.size()).step(f, t, dt, out);
  return out;
}

// ---------------------------------------------------------------------------
// Scenario

void Scenario::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
  if (sample_every == 0) throw std::invalid_argument("sample_every must be at least 1");
  if (nodes.empty()) throw std::invalid_argument("scenario has no nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    if (node.x0.size() != node.agent.state_dim())
      throw std::invalid_argument("node " + std::to_string(i + 1) + ": initial state has wrong dimension");
    if (node.agent.feedthrough() != 0.0)
      throw std::invalid_argument("node " + std::to_string(i + 1) +
                                  ": agents with direct feedthrough form an algebraic loop");
  }
  controller.validate(nodes.size());
}

SyncConditionReport synchronization_check(const Scenario& scenario) {
  SyncConditionReport r;
  if (scenario.nodes.size() < 2) return r;
  const auto& first = scenario.nodes.front().agent;
  if (!first.is_goodwin()) return r;
  for (const auto& node : scenario.nodes)
    if (!node.agent.is_goodwin() || !(node.agent.goodwin_params() == first.goodwin_params())) return r;
  const auto& params = first.goodwin_params();
  r.applicable = true;
  r.gamma4 = scenario.gamma4_override.value_or(hill_max_slope(params.hill_p));
  r.gamma = goodwin_iofp_gamma(params, r.gamma4);
  r.mu2 = mu2(build_laplacian(scenario.controller.p_graph));
  r.holds = synchronization_condition(r.gamma, r.mu2);
  return r;
}

// ---------------------------------------------------------------------------
// Closed loop

ClosedLoop::ClosedLoop(const Scenario& scenario) : scenario_(scenario), n_(scenario.size()) {
  scenario_.validate();
  const auto& ctrl = scenario_.controller;
  std::size_t off = 0;
  for (const auto& node : scenario_.nodes) {
    agent_off_.push_back(off);
    off += node.agent.state_dim();
  }
  zeta_off_.assign(n_, npos);
  if (ctrl.uses_internal_model()) {
    im_order_ = ctrl.internal_model.order();
    for (std::size_t i = 0; i < n_; ++i) {
      b_.push_back(ctrl.b_for(i));
      if (ctrl.mode == ControlMode::leader && i == ctrl.leader) continue;
      zeta_off_[i] = off;
      off += im_order_;
    }
  }
  weights_off_ = off;
  if (ctrl.adaptation) {
    adaptive_ = true;
    shared_weights_ = ctrl.shares_adaptation();
    n_p_weights_ = ctrl.p_graph.edges().size();
    n_n_weights_ = shared_weights_ ? 0 : ctrl.n_graph.edges().size();
    off += n_p_weights_ + n_n_weights_;
  }
  dim_ = off;
  for (auto* v : {&y_, &phi_, &eta_, &u_, &coupling_, &lpy_, &lieta_}) v->assign(n_, 0.0);
}

std::vector<double> ClosedLoop::initial_state() const {
  std::vector<double> x(dim_, 0.0);
  const auto& ctrl = scenario_.controller;
  for (std::size_t i = 0; i < n_; ++i) {
    const auto& x0 = scenario_.nodes[i].x0;
    std::copy(x0.begin(), x0.end(), x.begin() + static_cast<std::ptrdiff_t>(agent_off_[i]));
    if (zeta_off_[i] != npos && !ctrl.zeta0.empty())
      for (std::size_t k = 0; k < im_order_; ++k) x[zeta_off_[i] + k] = ctrl.zeta0[i](static_cast<Eigen::Index>(k));
  }
  if (adaptive_) {
    std::size_t k = weights_off_;
    for (const auto& e : ctrl.p_graph.edges()) x[k++] = e.weight;
    if (!shared_weights_)
      for (const auto& e : ctrl.n_graph.edges()) x[k++] = e.weight;
  }
  return x;
}

void ClosedLoop::signals(double t, std::span<const double> x, std::span<double> y, std::span<double> phi,
                         std::span<double> eta, std::span<double> u, std::span<double> coupling) const {
  const auto& ctrl = scenario_.controller;
  for (std::size_t i = 0; i < n_; ++i) {
    const auto& node = scenario_.nodes[i];
    y[i] = node.agent.output(x.subspan(agent_off_[i], node.agent.state_dim()));
    phi[i] = node.disturbance.output(t);
    eta[i] = 0.0;
    if (zeta_off_[i] != npos) {
      const auto& b = b_[i];
      for (std::size_t k = 0; k < im_order_; ++k) eta[i] += b(static_cast<Eigen::Index>(k)) * x[zeta_off_[i] + k];
    }
  }

  std::span<const double> wp, wn;
  if (adaptive_) {
    wp = x.subspan(weights_off_, n_p_weights_);
    wn = shared_weights_ ? wp : x.subspan(weights_off_ + n_p_weights_, n_n_weights_);
  }

  for (std::size_t i = 0; i < n_; ++i) u[i] = phi[i];
  for (double& c : coupling) c = 0.0;
  if (ctrl.mode == ControlMode::none) return;

  apply_laplacian(ctrl.p_graph.edges(), wp, y, lpy_);
  for (std::size_t i = 0; i < n_; ++i) u[i] -= lpy_[i];
  if (!ctrl.uses_internal_model()) return;

  apply_laplacian(ctrl.n_graph.edges(), wn, y, coupling);
  apply_laplacian(ctrl.n_graph.edges(), wn, eta, lieta_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (ctrl.mode == ControlMode::leader && i == ctrl.leader) continue;
    u[i] -= lieta_[i];
  }
}

void ClosedLoop::rhs(double t, std::span<const double> x, std::span<double> dx) const {
  signals(t, x, y_, phi_, eta_, u_, coupling_);
  const auto& ctrl = scenario_.controller;

  for (std::size_t i = 0; i < n_; ++i) {
    const auto& agent = scenario_.nodes[i].agent;
    const auto dim = agent.state_dim();
    agent.rhs(x.subspan(agent_off_[i], dim), u_[i], dx.subspan(agent_off_[i], dim));
  }

  if (ctrl.uses_internal_model()) {
    const auto& spec = ctrl.internal_model;
    for (std::size_t i = 0; i < n_; ++i) {
      if (zeta_off_[i] == npos) continue;
      const std::size_t base = zeta_off_[i];
      std::size_t k = 0;
      if (spec.has_constant) dx[base + k++] = 0.0;
      for (double w : spec.frequencies) {
        dx[base + k] = -w * x[base + k + 1];
        dx[base + k + 1] = w * x[base + k];
        k += 2;
      }
      for (k = 0; k < im_order_; ++k) dx[base + k] += b_[i](static_cast<Eigen::Index>(k)) * coupling_[i];
    }
  }

  if (adaptive_) {
    const auto& gains = *ctrl.adaptation;
    const auto& pe = ctrl.p_graph.edges();
    for (std::size_t k = 0; k < pe.size(); ++k) {
      const double d = y_[pe[k].i] - y_[pe[k].j];
      dx[weights_off_ + k] = gains.alpha[k] * d * d;
    }
    if (!shared_weights_) {
      const auto& ne = ctrl.n_graph.edges();
      for (std::size_t k = 0; k < ne.size(); ++k) {
        const double d = y_[ne[k].i] - y_[ne[k].j];
        dx[weights_off_ + n_p_weights_ + k] = gains.beta[k] * d * d;
      }
    }
  }
}

LoopSnapshot ClosedLoop::observe(double t, std::span<const double> x) const {
  const auto n = static_cast<Eigen::Index>(n_);
  LoopSnapshot s{Vector(n), Vector(n), Vector(n), Vector(n), Vector(n)};
  signals(t, x, {s.y.data(), n_}, {s.phi.data(), n_}, {s.eta.data(), n_}, {s.u.data(), n_},
          {s.coupling.data(), n_});
  return s;
}

std::size_t ClosedLoop::node_of_state(std::size_t index) const {
  for (std::size_t i = n_; i-- > 0;) {
    if (zeta_off_[i] != npos && index >= zeta_off_[i] && index < zeta_off_[i] + im_order_) return i;
  }
  for (std::size_t i = n_; i-- > 0;)
    if (index >= agent_off_[i] && index < agent_off_[i] + scenario_.nodes[i].agent.state_dim()) return i;
  return npos;
}

std::vector<std::string> ClosedLoop::weight_labels() const {
  std::vector<std::string> labels;
  if (!adaptive_) return labels;
  const auto& ctrl = scenario_.controller;
  const std::string p_prefix = shared_weights_ ? "w_" : "p_";
  for (const auto& e : ctrl.p_graph.edges())
    labels.push_back(p_prefix + std::to_string(e.i + 1) + "_" + std::to_string(e.j + 1));
  if (!shared_weights_)
    for (const auto& e : ctrl.n_graph.edges())
      labels.push_back("n_" + std::to_string(e.i + 1) + "_" + std::to_string(e.j + 1));
  return labels;
}

// ---------------------------------------------------------------------------
// Simulation

Trace simulate(const Scenario& scenario) {
  const ClosedLoop loop(scenario);
  const std::size_t n = scenario.size();

  Trace trace;
  trace.n_nodes = n;
  trace.y.resize(n);
  trace.phi.resize(n);
  trace.eta.resize(n);
  trace.weight_labels = loop.weight_labels();
  trace.weights.resize(trace.weight_labels.size());

  const auto cond = synchronization_check(scenario);
  if (cond.applicable) {
    std::ostringstream os;
    os << "sync condition: gamma = " << cond.gamma << ", mu2 = " << cond.mu2
       << (cond.holds ? ", gamma + mu2 > 0 HOLDS" : ", gamma + mu2 > 0 VIOLATED");
    trace.diagnostics.push_back(os.str());
    if (!cond.holds && scenario.controller.mode != ControlMode::none)
      trace.diagnostics.push_back("warning: synchronization hypothesis gamma + mu2 > 0 is violated");
  }

  std::vector<double> x = loop.initial_state();
  const auto steps = static_cast<std::size_t>(std::llround(scenario.t_end / scenario.dt));
  const VectorField field = [&loop](double t, std::span<const double> s, std::span<double> ds) {
    loop.rhs(t, s, ds);
  };
  Rk4Stepper stepper(x.size());
  bool weight_warned = false;

  auto record = [&](double t) {
    const auto snap = loop.observe(t, x);
    trace.times.push_back(t);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      trace.y[i].push_back(snap.y(ii));
      trace.phi[i].push_back(snap.phi(ii));
      trace.eta[i].push_back(snap.eta(ii));
    }
    for (std::size_t k = 0; k < trace.weights.size(); ++k) {
      const double w = x[loop.weights_offset() + k];
      trace.weights[k].push_back(w);
      if (w > 1e4 && !weight_warned) {
        weight_warned = true;
        trace.diagnostics.push_back("warning: adapted weight " + trace.weight_labels[k] + " exceeded 1e4 at t = " +
                                    std::to_string(t));
      }
    }
    if (scenario.track_average) trace.target.push_back(snap.phi.mean());
    if (scenario.record_states) trace.x.push_back(x);
  };

  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;
    if (k % scenario.sample_every == 0 || k == steps) record(t);
    if (k == steps) break;
    stepper.step(field, t, scenario.dt, x);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!(std::abs(x[j]) <= 1e9)) {
        const double t_next = static_cast<double>(k + 1) * scenario.dt;
        const auto node = loop.node_of_state(j);
        throw DivergenceError("divergence at t = " + std::to_string(t_next) +
                                  (node == ClosedLoop::npos ? std::string(" in adaptive weights")
                                                            : " at node " + std::to_string(node + 1)),
                              t_next);
      }
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Metrics

std::pair<std::size_t, std::size_t> trailing_window(const Trace& trace, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw std::invalid_argument("window fraction must be in (0, 1]");
  if (trace.times.empty()) throw std::invalid_argument("empty trace");
  const double t0 = trace.times.front();
  const double t1 = trace.times.back();
  const double start = t1 - window_fraction * (t1 - t0) - 1e-9 * std::max(1.0, t1 - t0);
  const auto it = std::lower_bound(trace.times.begin(), trace.times.end(), start);
  return {static_cast<std::size_t>(it - trace.times.begin()), trace.times.size()};
}

SyncError sync_error(const Trace& trace, double window_fraction) {
  const auto [begin, end] = trailing_window(trace, window_fraction);
  SyncError out;
  out.series.resize(trace.times.size());
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    double mean = 0.0;
    for (const auto& yi : trace.y) mean += yi[k];
    mean /= static_cast<double>(trace.n_nodes);
    double e = 0.0;
    for (const auto& yi : trace.y) e = std::max(e, std::abs(yi[k] - mean));
    out.series[k] = e;
  }
  for (std::size_t k = begin; k < end; ++k) out.summary = std::max(out.summary, out.series[k]);
  return out;
}

double tracking_error(const Trace& trace, std::span<const double> target, double window_fraction) {
  if (target.size() != trace.times.size()) throw std::invalid_argument("tracking_error: target grid mismatch");
  const auto [begin, end] = trailing_window(trace, window_fraction);
  double worst = 0.0;
  for (std::size_t k = begin; k < end; ++k)
    for (const auto& yi : trace.y) worst = std::max(worst, std::abs(yi[k] - target[k]));
  return worst;
}

namespace {

std::vector<double> node_mean(const std::vector<std::vector<double>>& series, std::size_t samples) {
  std::vector<double> out(samples, 0.0);
  if (series.empty()) return out;
  for (const auto& s : series)
    for (std::size_t k = 0; k < samples; ++k) out[k] += s[k];
  for (double& v : out) v /= static_cast<double>(series.size());
  return out;
}

}  // namespace

std::vector<double> average_input(const Trace& trace) { return node_mean(trace.phi, trace.times.size()); }

std::vector<double> mean_output(const Trace& trace) { return node_mean(trace.y, trace.times.size()); }

double window_peak_to_peak(const Trace& trace, std::span<const double> series, double window_fraction) {
  const auto [begin, end] = trailing_window(trace, window_fraction);
  const auto [lo, hi] = std::minmax_element(series.begin() + static_cast<std::ptrdiff_t>(begin),
                                            series.begin() + static_cast<std::ptrdiff_t>(end));
  return *hi - *lo;
}

// ---------------------------------------------------------------------------
// CSV

void write_csv(const Trace& trace, std::ostream& os) {
  const std::size_t n = trace.n_nodes;
  os << "t";
  for (const char* prefix : {"y_", "phi_", "eta_"})
    for (std::size_t i = 0; i < n; ++i) os << ',' << prefix << i + 1;
  os << ",sync_err";
  for (const auto& label : trace.weight_labels) os << ',' << label;
  const bool with_target = !trace.target.empty();
  if (with_target) os << ",target";
  os << '\n';

  const auto err = sync_error(trace, 1.0).series;
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    put(trace.times[k]);
    for (const auto* group : {&trace.y, &trace.phi, &trace.eta})
      for (std::size_t i = 0; i < n; ++i) {
        os << ',';
        put((*group)[i][k]);
      }
    os << ',';
    put(err[k]);
    for (const auto& w : trace.weights) {
      os << ',';
      put(w[k]);
    }
    if (with_target) {
      os << ',';
      put(trace.target[k]);
    }
    os << '\n';
  }
}

Trace read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("read_csv: missing header");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.empty() || header.front() != "t") throw std::invalid_argument("read_csv: header must start with t");
  std::size_t n = 0;
  while (n + 1 < header.size() && header[n + 1] == "y_" + std::to_string(n + 1)) ++n;
  const std::size_t sync_col = 1 + 3 * n;
  if (n == 0 || header.size() <= sync_col || header[sync_col] != "sync_err")
    throw std::invalid_argument("read_csv: unexpected header layout");

  Trace trace;
  trace.n_nodes = n;
  trace.y.resize(n);
  trace.phi.resize(n);
  trace.eta.resize(n);
  const bool with_target = header.back() == "target";
  trace.weight_labels.assign(header.begin() + static_cast<std::ptrdiff_t>(sync_col) + 1,
                             header.end() - (with_target ? 1 : 0));
  trace.weights.resize(trace.weight_labels.size());

  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.c_str();
    while (*p) {
      char* end = nullptr;
      row.push_back(std::strtod(p, &end));
      if (end == p) throw std::invalid_argument("read_csv: bad number on line " + std::to_string(line_no));
      p = end;
      if (*p == ',') ++p;
    }
    if (row.size() != header.size())
      throw std::invalid_argument("read_csv: wrong column count on line " + std::to_string(line_no));
    trace.times.push_back(row[0]);
    for (std::size_t i = 0; i < n; ++i) {
      trace.y[i].push_back(row[1 + i]);
      trace.phi[i].push_back(row[1 + n + i]);
      trace.eta[i].push_back(row[1 + 2 * n + i]);
    }
    for (std::size_t k = 0; k < trace.weights.size(); ++k) trace.weights[k].push_back(row[sync_col + 1 + k]);
    if (with_target) trace.target.push_back(row.back());
  }
  return trace;
}

}  // namespace syncnet
