#pragma once

#include <array>
#include <span>
#include <variant>

#include "syncnet/linalg.hpp"
#include "syncnet/lti.hpp"

namespace syncnet {

/// Goodwin oscillator with decay rates b1..b3 and Hill exponent p.
struct GoodwinParams {
  double b1 = 0.5;
  double b2 = 0.5;
  double b3 = 0.5;
  double hill_p = 20.0;

  void validate() const;
  friend bool operator==(const GoodwinParams&, const GoodwinParams&) = default;
};

using Vec3 = std::array<double, 3>;

/// x1' = -b1 x1 + (u - x4), x2' = b2 (x1 - x2), x3' = b3 (x2 - x3) with
/// x4 = -1 / (1 + max(x3, 0)^p). Throws on non-finite state.
Vec3 goodwin_rhs(const Vec3& x, double u, const GoodwinParams& params);

/// d goodwin_rhs / dx (valid where x3 > 0).
std::array<Vec3, 3> goodwin_jacobian(const Vec3& x, const GoodwinParams& params);

/// sup_{z>0} |d/dz 1/(1+z^p)|. Golden-section on log z for p > 1; the
/// supremum sits at z -> 0+ for p <= 1 (1 at p = 1, unbounded below).
double hill_max_slope(double p);

/// Secant-criterion IOFP index of the Goodwin cascade,
/// -(-1 + g1 g2 g3 g4 cos^4(pi/4)) / g1 with g1 = 1/b1, g2 = g3 = 1.
double goodwin_iofp_gamma(const GoodwinParams& params, double gamma4);

/// Synchronization hypothesis gamma + mu2 > 0.
inline bool synchronization_condition(double gamma, double mu2) { return gamma + mu2 > 0.0; }

/// SISO agent: either a Goodwin oscillator or an LTI realization.
class AgentModel {
 public:
  static AgentModel goodwin(const GoodwinParams& params);
  static AgentModel linear(const StateSpace& ss);

  bool is_goodwin() const noexcept { return std::holds_alternative<GoodwinParams>(kind_); }
  const GoodwinParams& goodwin_params() const { return std::get<GoodwinParams>(kind_); }
  const StateSpace& state_space() const { return std::get<StateSpace>(kind_); }

  std::size_t state_dim() const noexcept;
  /// Output ignoring feedthrough; closed-loop simulation rejects D != 0.
  double output(std::span<const double> x) const;
  double feedthrough() const noexcept { return is_goodwin() ? 0.0 : state_space().d; }
  void rhs(std::span<const double> x, double u, std::span<double> dx) const;

 private:
  explicit AgentModel(std::variant<GoodwinParams, StateSpace> kind) : kind_(std::move(kind)) {}
  std::variant<GoodwinParams, StateSpace> kind_;
};

/// Realizes a proper transfer function as an agent.
AgentModel linear_agent(const TransferFunction& tf);

}  // namespace syncnet
