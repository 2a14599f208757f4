#include "syncnet/agents.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace syncnet {

void GoodwinParams::validate() const {
  if (!(b1 > 0.0 && b2 > 0.0 && b3 > 0.0)) throw std::invalid_argument("Goodwin decay rates must be positive");
  if (!(hill_p > 0.0)) throw std::invalid_argument("Hill exponent must be positive");
}

namespace {

double hill_term(double x3, double p) { return -1.0 / (1.0 + std::pow(std::max(x3, 0.0), p)); }

double hill_slope(double z, double p) {
  const double zp = std::pow(z, p);
  return p * std::pow(z, p - 1.0) / ((1.0 + zp) * (1.0 + zp));
}

}  // namespace

Vec3 goodwin_rhs(const Vec3& x, double u, const GoodwinParams& params) {
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("goodwin_rhs: non-finite state");
  const double x4 = hill_term(x[2], params.hill_p);
  return {-params.b1 * x[0] + (u - x4), -params.b2 * x[1] + params.b2 * x[0],
          -params.b3 * x[2] + params.b3 * x[1]};
}

std::array<Vec3, 3> goodwin_jacobian(const Vec3& x, const GoodwinParams& params) {
  const double slope = x[2] > 0.0 ? hill_slope(x[2], params.hill_p) : 0.0;
  // d(-x4)/dx3 = -d/dx3 [1/(1+x3^p)] = -slope
  return {{{-params.b1, 0.0, -slope}, {params.b2, -params.b2, 0.0}, {0.0, params.b3, -params.b3}}};
}

double hill_max_slope(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("hill_max_slope: p must be positive");
  if (p < 1.0) return std::numeric_limits<double>::infinity();
  if (p == 1.0) return 1.0;

  // Golden-section maximization over log z in [-3, 3] (natural log). For p
  // close to 1 the maximizer drifts toward 0, so widen the lower end while
  // the slope is still increasing toward it.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [p](double lz) { return hill_slope(std::exp(lz), p); };
  double lo = -3.0, hi = 3.0;
  while (lo > -600.0 && f(lo) >= f(lo + 1e-3)) lo -= 3.0;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-8) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::max(f1, f2);
}

double goodwin_iofp_gamma(const GoodwinParams& params, double gamma4) {
  if (!(gamma4 > 0.0)) throw std::invalid_argument("goodwin_iofp_gamma: gamma4 must be positive");
  const double g1 = 1.0 / params.b1;
  const double g2 = params.b2 / params.b2;
  const double g3 = params.b3 / params.b3;
  constexpr double cos4 = 0.25;  // cos^4(pi/4), exact
  return -(-1.0 + g1 * g2 * g3 * gamma4 * cos4) / g1;
}

AgentModel AgentModel::goodwin(const GoodwinParams& params) {
  params.validate();
  return AgentModel(params);
}

AgentModel AgentModel::linear(const StateSpace& ss) {
  const auto n = ss.a.rows();
  if (ss.a.cols() != n || ss.b.size() != n || ss.c.size() != n)
    throw std::invalid_argument("linear agent: inconsistent state-space dimensions");
  return AgentModel(ss);
}

std::size_t AgentModel::state_dim() const noexcept { return is_goodwin() ? 3 : state_space().order(); }

double AgentModel::output(std::span<const double> x) const {
  if (is_goodwin()) return x[0];
  const auto& ss = state_space();
  double y = 0.0;
  for (Eigen::Index k = 0; k < ss.c.size(); ++k) y += ss.c(k) * x[static_cast<std::size_t>(k)];
  return y;
}

void AgentModel::rhs(std::span<const double> x, double u, std::span<double> dx) const {
  if (is_goodwin()) {
    const auto d = goodwin_rhs({x[0], x[1], x[2]}, u, goodwin_params());
    dx[0] = d[0];
    dx[1] = d[1];
    dx[2] = d[2];
    return;
  }
  const auto& ss = state_space();
  const auto n = ss.a.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = ss.b(i) * u;
    for (Eigen::Index j = 0; j < n; ++j) acc += ss.a(i, j) * x[static_cast<std::size_t>(j)];
    dx[static_cast<std::size_t>(i)] = acc;
  }
}

AgentModel linear_agent(const TransferFunction& tf) { return AgentModel::linear(realize(tf)); }

}  // namespace syncnet
