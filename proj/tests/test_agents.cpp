#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "syncnet/agents.hpp"
#include "syncnet/netgraph.hpp"
#include "syncnet/sim.hpp"

using namespace syncnet;

namespace {

const GoodwinParams kPaper{0.5, 0.5, 0.5, 20.0};

double hill_slope(double z, double p) { return p * std::pow(z, p - 1) / std::pow(1 + std::pow(z, p), 2); }

// Stationary point of the Hill slope from d/dz = 0.
double hill_slope_closed_form(double p) { return hill_slope(std::pow((p - 1) / (p + 1), 1 / p), p); }

}  // namespace

TEST_CASE("goodwin vector field") {
  const auto d0 = goodwin_rhs({0, 0, 0}, 0.0, kPaper);
  CHECK(d0[0] == 1.0);
  CHECK(d0[1] == 0.0);
  CHECK(d0[2] == 0.0);

  const auto d1 = goodwin_rhs({1, 1, 1}, 0.0, kPaper);
  for (double v : d1) CHECK(std::abs(v) < 1e-15);

  const auto du = goodwin_rhs({1, 1, 1}, 0.3, kPaper);
  CHECK(du[0] == doctest::Approx(0.3));

  // Negative x3 is clamped inside the Hill term.
  const auto neg = goodwin_rhs({0, 0, -0.5}, 0.0, kPaper);
  CHECK(neg[0] == 1.0);
  CHECK_THROWS(goodwin_rhs({0, NAN, 0}, 0.0, kPaper));
}

TEST_CASE("goodwin fixed points satisfy the scalar equilibrium equation") {
  // With u = 0, x1 = x2 = x3 = x and -b1 x + 1 / (1 + x^p) = 0; bisect for x.
  for (double b1 : {0.2, 0.5, 1.0, 3.0}) {
    const GoodwinParams g{b1, 0.7, 0.9, 8.0};
    double lo = 0.0, hi = 10.0;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      (-b1 * mid + 1.0 / (1.0 + std::pow(mid, g.hill_p)) > 0 ? lo : hi) = mid;
    }
    const double x = 0.5 * (lo + hi);
    for (double v : goodwin_rhs({x, x, x}, 0.0, g)) CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("goodwin jacobian matches central differences") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  const GoodwinParams g{0.5, 0.6, 0.7, 6.0};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 x{u(rng), u(rng), u(rng)};
    const auto jac = goodwin_jacobian(x, g);
    for (int j = 0; j < 3; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      Vec3 xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const auto fp = goodwin_rhs(xp, 0.0, g), fm = goodwin_rhs(xm, 0.0, g);
      for (int i = 0; i < 3; ++i) {
        const double fd = (fp[i] - fm[i]) / (2 * h);
        worst = std::max(worst, std::abs(fd - jac[i][j]) / std::max(1.0, std::abs(jac[i][j])));
      }
    }
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("maximum hill slope") {
  CHECK(hill_max_slope(20.0) == doctest::Approx(hill_slope_closed_form(20.0)).epsilon(1e-8));
  CHECK(hill_max_slope(20.0) == doctest::Approx(5.012521).epsilon(1e-6));
  CHECK(hill_max_slope(4.0) == doctest::Approx(hill_slope_closed_form(4.0)).epsilon(1e-8));
  CHECK(hill_max_slope(1.0) == 1.0);
  CHECK(std::isinf(hill_max_slope(0.5)));
  CHECK_THROWS(hill_max_slope(0.0));

  // Dense-grid cross-check over the bracket.
  for (double p : {1.5, 2.0, 4.0, 10.0, 20.0, 60.0, 100.0}) {
    double best = 0.0;
    for (int k = 0; k <= 200000; ++k) best = std::max(best, hill_slope(std::pow(10.0, -3.0 + 6.0 * k / 200000), p));
    CHECK(hill_max_slope(p) == doctest::Approx(best).epsilon(1e-6));
    CHECK(hill_max_slope(p) >= best - 1e-12);
  }
}

TEST_CASE("iofp gain of the goodwin cascade") {
  CHECK(goodwin_iofp_gamma(kPaper, 5.0) == -0.75);
  CHECK(goodwin_iofp_gamma({1.0, 0.5, 0.5, 20.0}, 5.0) == doctest::Approx(-0.25));
  const double boundary = 4.0 / 2.0;  // gamma1 = 1 / b1 = 2
  CHECK(std::abs(goodwin_iofp_gamma(kPaper, boundary)) < 1e-15);
  CHECK_THROWS(goodwin_iofp_gamma(kPaper, 0.0));
}

TEST_CASE("synchronization predicate") {
  const double mu = mu2(build_laplacian(WeightedGraph::cycle(4)));
  CHECK(synchronization_condition(goodwin_iofp_gamma(kPaper, 5.0), mu));
  CHECK_FALSE(synchronization_condition(-0.75, 0.0));
  CHECK_FALSE(synchronization_condition(-2.0, 2.0));
}

TEST_CASE("agent models") {
  const auto gw = AgentModel::goodwin(kPaper);
  CHECK(gw.is_goodwin());
  CHECK(gw.state_dim() == 3);
  const std::vector<double> x{0.3, 0.4, 0.5};
  CHECK(gw.output(x) == 0.3);

  const auto integrator = linear_agent(TransferFunction(Polynomial{1}, Polynomial{0, 1}));
  CHECK(integrator.state_dim() == 1);
  std::vector<double> dx(1);
  integrator.rhs(std::vector<double>{2.0}, 0.7, dx);
  CHECK(dx[0] == 0.7);
  CHECK(integrator.output(std::vector<double>{2.0}) == 2.0);

  const Polynomial nh{0.16, 0.8, 1.0};
  const auto dac = linear_agent(TransferFunction(nh, 0.01 * Polynomial{0, 4, 0, 1} + nh));
  CHECK(dac.state_dim() == 3);
  CHECK(dac.feedthrough() == 0.0);
}

TEST_CASE("first-order lag step response") {
  const auto lag = linear_agent(TransferFunction(Polynomial{1}, Polynomial{1, 1}));
  const VectorField f = [&](double, std::span<const double> x, std::span<double> dx) { lag.rhs(x, 1.0, dx); };
  Rk4Stepper stepper(1);
  std::vector<double> x{0.0};
  const double dt = 1e-3;
  for (int k = 0; k < 1000; ++k) stepper.step(f, k * dt, dt, x);
  CHECK(std::abs(lag.output(x) - (1.0 - std::exp(-1.0))) <= 1e-6);
}

TEST_CASE("linear agent steady-state sinusoidal response") {
  const TransferFunction tf(Polynomial{2.0, 1.0}, Polynomial{1.0, 1.2, 1.0});  // poles Re = -0.6
  const auto agent = linear_agent(tf);
  for (double w : {0.3, 1.0, 3.0}) {
    const VectorField f = [&](double t, std::span<const double> x, std::span<double> dx) {
      agent.rhs(x, std::sin(w * t), dx);
    };
    Rk4Stepper stepper(agent.state_dim());
    std::vector<double> x(agent.state_dim(), 0.0);
    const double dt = 1e-3;
    const double settle = 10.0 / 0.6;
    const double period = 2 * std::numbers::pi / w;
    const int n_settle = static_cast<int>(settle / dt), n_period = static_cast<int>(period / dt);
    int k = 0;
    for (; k < n_settle; ++k) stepper.step(f, k * dt, dt, x);
    // Project one period of output onto sin and cos.
    double s = 0.0, c = 0.0;
    for (int j = 0; j < n_period; ++j, ++k) {
      const double t = k * dt, y = agent.output(x);
      s += y * std::sin(w * t) * dt;
      c += y * std::cos(w * t) * dt;
      stepper.step(f, t, dt, x);
    }
    const double gain = 2.0 / (n_period * dt) * std::hypot(s, c);
    const double phase = std::atan2(c, s);
    const auto h = freq_response(tf, w);
    CHECK(gain == doctest::Approx(std::abs(h)).epsilon(0.01));
    CHECK(std::abs(phase - std::arg(h)) <= 0.01 * std::max(1.0, std::abs(std::arg(h))));
  }
}
