#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "syncnet/exosystem.hpp"
#include "syncnet/linalg.hpp"
#include "syncnet/netgraph.hpp"

namespace syncnet {

enum class ControlMode { none, proportional, internal_model, leader };

const char* to_string(ControlMode mode) noexcept;

/// Per-edge adaptation gains, index-aligned with the p and n graphs' edges.
/// One state per undirected edge, so alpha_ij = alpha_ji by construction.
struct AdaptationGains {
  std::vector<double> alpha;
  std::vector<double> beta;

  friend bool operator==(const AdaptationGains&, const AdaptationGains&) = default;
};

struct ControllerConfig {
  ControlMode mode = ControlMode::none;
  std::size_t leader = 0;  // zero-based; leader mode only
  WeightedGraph p_graph;   // proportional weights p_ij
  WeightedGraph n_graph;   // internal-model weights n_ij
  std::optional<AdaptationGains> adaptation;
  ExoSpec internal_model;    // shared generator A of every G_i
  std::vector<Vector> b;     // per-node B_i; empty selects C^T of the canonical pair
  std::vector<Vector> zeta0; // per-node zeta_i(0); empty selects zeros

  bool uses_internal_model() const noexcept {
    return mode == ControlMode::internal_model || mode == ControlMode::leader;
  }
  /// p and n weights evolve as one state (identical graphs and gains).
  bool shares_adaptation() const;
  /// B_i for node i (explicit or canonical default).
  Vector b_for(std::size_t node) const;

  void validate(std::size_t n_nodes) const;
};

/// (L v)_i = sum_{(i,j)} w_ij (v_i - v_j) over an edge list; `weights`
/// overrides the stored edge weights when nonempty.
void apply_laplacian(std::span<const Edge> edges, std::span<const double> weights,
                     std::span<const double> v, std::span<double> out);

/// u_bar = -L_p y
Vector proportional_control(const Vector& y, const Laplacian& l_p);

/// Internal model G_i: zeta' = A zeta + B coupling, eta = B^T zeta.
struct InternalModelController {
  InternalModelController(Matrix a, Vector b, Vector zeta);

  Matrix a;
  Vector b;
  Vector zeta;
};

struct ImDerivative {
  Vector zeta_dot;
  double eta;
};

ImDerivative im_controller_rhs(const InternalModelController& ctrl, double coupling_in);

/// Closed-loop input u = phi - L_p y - L_I eta.
Vector composite_control(const Vector& y, const Vector& etas, const Laplacian& l_p, const Laplacian& l_i,
                         const Vector& phi);

/// Leader node applies phi - (L_p y)_leader only; the others apply the
/// composite law with the leader's eta taken as zero (the leader has no G).
Vector leader_control(const Vector& y, const Vector& etas, const Laplacian& l_p, const Laplacian& l_i,
                      const Vector& phi, std::size_t leader);

/// p_e' = alpha_e (y_i - y_j)^2 for each edge e = (i, j).
std::vector<double> adapt_weights_rhs(std::span<const double> y, std::span<const Edge> edges,
                                      std::span<const double> gains);

}  // namespace syncnet
