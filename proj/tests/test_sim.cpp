#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "syncnet/errors.hpp"
#include "syncnet/exosystem.hpp"
#include "syncnet/sim.hpp"

using namespace syncnet;

namespace {

double decay_error(double dt) {
  const VectorField f = [](double, std::span<const double> x, std::span<double> dx) { dx[0] = -x[0]; };
  Rk4Stepper stepper(1);
  std::vector<double> x{1.0};
  const int n = static_cast<int>(std::lround(1.0 / dt));
  for (int k = 0; k < n; ++k) stepper.step(f, k * dt, dt, x);
  return std::abs(x[0] - std::exp(-1.0));
}

Trace constant_trace(std::vector<std::vector<double>> y) {
  Trace t;
  t.n_nodes = y.size();
  for (std::size_t k = 0; k < y[0].size(); ++k) t.times.push_back(static_cast<double>(k));
  t.phi.assign(y.size(), std::vector<double>(y[0].size(), 0.0));
  t.eta = t.phi;
  t.y = std::move(y);
  return t;
}

Scenario exosystem_as_agent() {
  // Rotation generator realized as a linear agent: pure oscillation, no input.
  const Polynomial den{4.0, 0.0, 1.0};
  Scenario sc;
  sc.t_end = 100.0;
  sc.dt = 1e-3;
  sc.sample_every = 100;
  sc.record_states = true;
  const auto agent = linear_agent(TransferFunction(Polynomial{1.0}, den));
  sc.nodes.push_back({agent, {1.0, 0.0}, Exosystem::zero({true, {}})});
  sc.controller.p_graph = WeightedGraph(1);
  sc.controller.n_graph = WeightedGraph(1);
  sc.controller.internal_model = {true, {}};
  return sc;
}

}  // namespace

TEST_CASE("rk4 step") {
  const VectorField decay = [](double, std::span<const double> x, std::span<double> dx) { dx[0] = -x[0]; };
  CHECK(rk4_step(decay, std::vector<double>{1.0}, 0.0, 0.1)[0] == doctest::Approx(0.9048375).epsilon(1e-7));
  CHECK(std::abs(rk4_step(decay, std::vector<double>{1.0}, 0.0, 0.1)[0] - 0.9048375) <= 1e-7);

  const VectorField still = [](double, std::span<const double>, std::span<double> dx) {
    for (auto& v : dx) v = 0.0;
  };
  const std::vector<double> x{1.5, -2.0};
  CHECK(rk4_step(still, x, 3.0, 0.5) == x);

  const VectorField bad = [](double, std::span<const double>, std::span<double> dx) { dx[0] = NAN; };
  CHECK_THROWS_AS(rk4_step(bad, std::vector<double>{1.0}, 0.0, 0.1), DivergenceError);
}

TEST_CASE("rk4 is fourth order") {
  for (double dt : {0.1, 0.05, 0.025}) {
    const double ratio = decay_error(dt) / decay_error(dt / 2);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
  }
}

TEST_CASE("rk4 evaluates time-dependent forcing at stage times") {
  // x' = cos t, x(0) = 0: exact solution sin t.
  const VectorField f = [](double t, std::span<const double>, std::span<double> dx) { dx[0] = std::cos(t); };
  Rk4Stepper stepper(1);
  std::vector<double> x{0.0};
  for (int k = 0; k < 1000; ++k) stepper.step(f, k * 1e-2, 1e-2, x);
  CHECK(std::abs(x[0] - std::sin(10.0)) < 1e-9);
}

TEST_CASE("scenario validation") {
  auto sc = fixture::goodwin_cycle(ControlMode::proportional, {0, 0, 0, 0});
  sc.dt = -1.0;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  sc.dt = 1e-3;
  sc.nodes[2].x0 = {1.0, 2.0};
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
}

TEST_CASE("sync and tracking metrics") {
  CHECK(sync_error(constant_trace({{1, 1, 1}, {1, 1, 1}})).summary == 0.0);
  const auto t = constant_trace({{1, 1, 1, 1, 1}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}});
  CHECK(sync_error(t).summary == doctest::Approx(0.75));
  CHECK(sync_error(t).series.size() == 5);

  auto tr = constant_trace({{0, 1, 2, 3}, {0, 1, 2, 3}});
  const std::vector<double> target{0, 1, 2, 3};
  CHECK(tracking_error(tr, target, 0.5) == 0.0);
  const std::vector<double> shifted{0, 1, 2, 3.5};
  CHECK(tracking_error(tr, shifted, 0.5) == doctest::Approx(0.5));
  CHECK_THROWS(tracking_error(tr, std::vector<double>{1.0}, 0.5));
  CHECK_THROWS(sync_error(tr, 0.0));
  CHECK(window_peak_to_peak(tr, target, 1.0) == 3.0);
}

TEST_CASE("goodwin network behaviour") {
  SUBCASE("uncoupled oscillators stay apart") {
    CHECK(sync_error(simulate(fixture::goodwin_cycle(ControlMode::none, {0, 0, 0, 0}))).summary > 0.1);
  }
  SUBCASE("proportional coupling synchronizes") {
    CHECK(sync_error(simulate(fixture::goodwin_cycle(ControlMode::proportional, {0, 0, 0, 0}))).summary <= 1e-2);
  }
  SUBCASE("constant disturbances break proportional synchronization") {
    const auto sc = fixture::goodwin_cycle(ControlMode::proportional, {0.26, 0.8, 0.05, 0.55});
    auto fine = sc;
    fine.dt = sc.dt / 2;
    const double a = sync_error(simulate(sc)).summary;
    CHECK(a > 0.05);
    CHECK(std::abs(a - sync_error(simulate(fine)).summary) <= 0.1 * a);
  }
  // Both summaries sit at rounding level here, so the relative comparison
  // gets an absolute floor.
  SUBCASE("internal models restore it, insensitive to the step size") {
    const auto coarse = fixture::goodwin_cycle(ControlMode::internal_model, {0.26, 0.8, 0.05, 0.55});
    auto fine = coarse;
    fine.dt = coarse.dt / 2;
    const double a = sync_error(simulate(coarse)).summary;
    const double b = sync_error(simulate(fine)).summary;
    CHECK(a <= 1e-2);
    CHECK(std::abs(a - b) <= 0.1 * std::max(a, b) + 1e-9);
  }
}

TEST_CASE("disturbance series is exact and traces are deterministic") {
  auto sc = fixture::goodwin_cycle(ControlMode::internal_model, {0.26, 0.8, 0.05, 0.55}, 20.0);
  const std::vector<Sinusoid> s{{1.3, 0.4, 0.2}};
  sc.controller.internal_model = {true, {1.3}};
  for (auto& node : sc.nodes) node.disturbance = Exosystem::from_signal({true, {1.3}}, node.disturbance.output(0), s);
  sc.sample_every = 7;
  const auto a = simulate(sc);
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < a.times.size(); ++k)
      worst = std::max(worst, std::abs(a.phi[i][k] - sc.nodes[i].disturbance.output(a.times[k])));
  CHECK(worst <= 1e-12);
  CHECK(a.times.back() == doctest::Approx(20.0));
  CHECK(a.times[1] == doctest::Approx(7e-3));

  const auto b = simulate(sc);
  std::ostringstream ca, cb;
  write_csv(a, ca);
  write_csv(b, cb);
  CHECK(ca.str() == cb.str());
}

TEST_CASE("csv round trip is bit-identical") {
  auto sc = fixture::goodwin_cycle(ControlMode::internal_model, {0.26, 0.8, 0.05, 0.55}, 5.0);
  sc.controller.adaptation = AdaptationGains{{1, 1, 1, 1}, {1, 1, 1, 1}};
  const auto trace = simulate(sc);
  std::stringstream csv;
  write_csv(trace, csv);
  const std::string text = csv.str();
  CHECK(text.rfind("t,y_1,y_2,y_3,y_4,phi_1,phi_2,phi_3,phi_4,eta_1,eta_2,eta_3,eta_4,sync_err,w_1_2", 0) == 0);
  const auto back = read_csv(csv);
  CHECK(back.times == trace.times);
  CHECK(back.y == trace.y);
  CHECK(back.phi == trace.phi);
  CHECK(back.eta == trace.eta);
  CHECK(back.weights == trace.weights);
  CHECK(back.weight_labels == trace.weight_labels);
  CHECK(back.target.empty());

  auto with_target = trace;
  with_target.target = average_input(trace);
  std::stringstream csv2;
  write_csv(with_target, csv2);
  const auto back2 = read_csv(csv2);
  CHECK(back2.target == with_target.target);
  CHECK(back2.weights == trace.weights);
}

TEST_CASE("norm drift of a pure oscillator agent") {
  const auto sc = exosystem_as_agent();
  const auto trace = simulate(sc);
  // Controllable canonical states (x, x') of x'' = -4 x: conserved 4 x^2 + x'^2.
  const auto energy = [](const std::vector<double>& x) { return 4 * x[0] * x[0] + x[1] * x[1]; };
  double worst = 0.0;
  for (const auto& x : trace.x) worst = std::max(worst, std::abs(std::sqrt(energy(x)) - std::sqrt(energy(trace.x[0]))));
  CHECK(worst <= 1e-8);
}

TEST_CASE("divergence is detected") {
  Scenario sc;
  sc.t_end = 100.0;
  sc.dt = 1e-2;
  const auto unstable = linear_agent(TransferFunction(Polynomial{1.0}, Polynomial{-1.0, 1.0}));
  for (int i = 0; i < 2; ++i) sc.nodes.push_back({unstable, {1.0}, Exosystem::zero({true, {}})});
  sc.controller.p_graph = WeightedGraph::path(2);
  sc.controller.n_graph = WeightedGraph::path(2);
  sc.controller.internal_model = {true, {}};
  try {
    simulate(sc);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.time() == doctest::Approx(std::log(1e9)).epsilon(0.01));
  }
}

TEST_CASE("synchronization condition report") {
  const auto r = synchronization_check(fixture::goodwin_cycle(ControlMode::proportional, {0, 0, 0, 0}));
  CHECK(r.applicable);
  CHECK(r.gamma == -0.75);
  CHECK(r.mu2 == doctest::Approx(2.0));
  CHECK(r.holds);
}
