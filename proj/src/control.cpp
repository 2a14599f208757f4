#include "syncnet/control.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace syncnet {

const char* to_string(ControlMode mode) noexcept {
  switch (mode) {
    case ControlMode::none: return "none";
    case ControlMode::proportional: return "proportional";
    case ControlMode::internal_model: return "internal_model";
    case ControlMode::leader: return "leader";
  }
  return "?";
}

bool ControllerConfig::shares_adaptation() const {
  return adaptation && p_graph == n_graph && adaptation->alpha == adaptation->beta;
}

Vector ControllerConfig::b_for(std::size_t node) const {
  if (!b.empty()) return b.at(node);
  return canonical_exosystem(internal_model).c.transpose();
}

void ControllerConfig::validate(std::size_t n_nodes) const {
  if (p_graph.size() != n_nodes || n_graph.size() != n_nodes)
    throw std::invalid_argument("controller graphs must cover all " + std::to_string(n_nodes) + " nodes");
  if (mode == ControlMode::leader && leader >= n_nodes)
    throw std::invalid_argument("leader index out of range");
  if (adaptation) {
    if (adaptation->alpha.size() != p_graph.edges().size() || adaptation->beta.size() != n_graph.edges().size())
      throw std::invalid_argument("adaptation gains must match the edge lists");
    for (double g : adaptation->alpha)
      if (!(g > 0.0)) throw std::invalid_argument("adaptation gains must be positive");
    for (double g : adaptation->beta)
      if (!(g > 0.0)) throw std::invalid_argument("adaptation gains must be positive");
  }
  if (uses_internal_model()) {
    internal_model.validate();
    const auto a = canonical_exosystem(internal_model).a;
    if (!b.empty() && b.size() != n_nodes) throw std::invalid_argument("need one B per node");
    if (!zeta0.empty() && zeta0.size() != n_nodes) throw std::invalid_argument("need one zeta0 per node");
    for (std::size_t i = 0; i < n_nodes; ++i) {
      const Vector bi = b_for(i);
      if (bi.size() != a.rows()) throw std::invalid_argument("B dimension does not match the internal model");
      if (!is_observable(a, bi.transpose()))
        throw std::invalid_argument("(A, B^T) unobservable at node " + std::to_string(i + 1));
      if (!zeta0.empty() && zeta0[i].size() != a.rows())
        throw std::invalid_argument("zeta0 dimension does not match the internal model");
    }
  }
}

void apply_laplacian(std::span<const Edge> edges, std::span<const double> weights, std::span<const double> v,
                     std::span<double> out) {
  for (double& o : out) o = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const double w = weights.empty() ? e.weight : weights[k];
    const double diff = w * (v[e.i] - v[e.j]);
    out[e.i] += diff;
    out[e.j] -= diff;
  }
}

Vector proportional_control(const Vector& y, const Laplacian& l_p) {
  if (static_cast<std::size_t>(y.size()) != l_p.size())
    throw std::invalid_argument("proportional_control: dimension mismatch");
  return -(l_p.matrix() * y);
}

InternalModelController::InternalModelController(Matrix a_, Vector b_, Vector zeta_)
    : a(std::move(a_)), b(std::move(b_)), zeta(std::move(zeta_)) {
  if (!is_skew_symmetric(a)) throw std::invalid_argument("internal model: A must be skew-symmetric");
  if (b.size() != a.rows() || zeta.size() != a.rows())
    throw std::invalid_argument("internal model: dimension mismatch");
  if (!is_observable(a, b.transpose())) throw std::invalid_argument("internal model: (A, B^T) unobservable");
}

ImDerivative im_controller_rhs(const InternalModelController& ctrl, double coupling_in) {
  return {ctrl.a * ctrl.zeta + ctrl.b * coupling_in, ctrl.b.dot(ctrl.zeta)};
}

Vector composite_control(const Vector& y, const Vector& etas, const Laplacian& l_p, const Laplacian& l_i,
                         const Vector& phi) {
  const auto n = static_cast<Eigen::Index>(l_p.size());
  if (y.size() != n || etas.size() != n || phi.size() != n || static_cast<Eigen::Index>(l_i.size()) != n)
    throw std::invalid_argument("composite_control: dimension mismatch");
  return phi - l_p.matrix() * y - l_i.matrix() * etas;
}

Vector leader_control(const Vector& y, const Vector& etas, const Laplacian& l_p, const Laplacian& l_i,
                      const Vector& phi, std::size_t leader) {
  if (leader >= l_p.size()) throw std::invalid_argument("leader index out of range");
  Vector eta = etas;
  const auto l = static_cast<Eigen::Index>(leader);
  eta(l) = 0.0;
  Vector u = composite_control(y, eta, l_p, l_i, phi);
  u(l) = phi(l) - l_p.matrix().row(l).dot(y);
  return u;
}

std::vector<double> adapt_weights_rhs(std::span<const double> y, std::span<const Edge> edges,
                                      std::span<const double> gains) {
  if (gains.size() != edges.size()) throw std::invalid_argument("adapt_weights_rhs: one gain per edge");
  std::vector<double> out(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double diff = y[edges[k].i] - y[edges[k].j];
    out[k] = gains[k] * diff * diff;
  }
  return out;
}

}  // namespace syncnet
