#include "syncnet/exosystem.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include "syncnet/errors.hpp"

namespace syncnet {

void ExoSpec::validate() const {
  if (!has_constant && frequencies.empty())
    throw std::invalid_argument("exosystem needs a constant or at least one frequency");
  for (std::size_t k = 0; k < frequencies.size(); ++k) {
    if (!(frequencies[k] > 0.0) || !std::isfinite(frequencies[k]))
      throw std::invalid_argument("exosystem frequencies must be positive");
    for (std::size_t l = 0; l < k; ++l)
      if (frequencies[l] == frequencies[k])
        throw std::invalid_argument("duplicate exosystem frequency " + std::to_string(frequencies[k]));
  }
}

ExoSpec ExoSpec::merge(const ExoSpec& a, const ExoSpec& b) {
  ExoSpec out{a.has_constant || b.has_constant, a.frequencies};
  for (double w : b.frequencies)
    if (std::find(out.frequencies.begin(), out.frequencies.end(), w) == out.frequencies.end())
      out.frequencies.push_back(w);
  return out;
}

CanonicalPair canonical_exosystem(const ExoSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.order());
  CanonicalPair out{Matrix::Zero(n, n), RowVector::Zero(n)};
  Eigen::Index k = 0;
  if (spec.has_constant) out.c(k++) = 1.0;
  for (double w : spec.frequencies) {
    out.a(k, k + 1) = -w;
    out.a(k + 1, k) = w;
    out.c(k) = 1.0;
    k += 2;
  }
  return out;
}

Matrix observability_matrix(const Matrix& a, const RowVector& row) {
  if (a.rows() != a.cols() || row.size() != a.rows())
    throw std::invalid_argument("observability_matrix: dimension mismatch");
  const Eigen::Index n = a.rows();
  Matrix o(n, n);
  RowVector r = row;
  for (Eigen::Index k = 0; k < n; ++k) {
    o.row(k) = r;
    r = r * a;
  }
  return o;
}

bool is_observable(const Matrix& a, const RowVector& row) {
  return numerical_rank(observability_matrix(a, row)) == a.rows();
}

Vector rotate_blocks(const ExoSpec& spec, const Vector& v, double t) {
  Vector out = v;
  Eigen::Index k = spec.has_constant ? 1 : 0;
  for (double w : spec.frequencies) {
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    out(k) = c * v(k) - s * v(k + 1);
    out(k + 1) = s * v(k) + c * v(k + 1);
    k += 2;
  }
  return out;
}

Exosystem::Exosystem(ExoSpec spec, Vector xi0)
    : Exosystem(spec, canonical_exosystem(spec).c, std::move(xi0)) {}

Exosystem::Exosystem(ExoSpec spec, RowVector c, Vector xi0)
    : spec_(std::move(spec)), c_(std::move(c)), xi0_(std::move(xi0)) {
  a_ = canonical_exosystem(spec_).a;
  if (c_.size() != a_.rows() || xi0_.size() != a_.rows())
    throw std::invalid_argument("exosystem: output row / state dimension mismatch");
  if (!is_observable(a_, c_)) throw std::invalid_argument("exosystem: (A, C) is not observable");
}

Exosystem Exosystem::from_signal(const ExoSpec& spec, double constant,
                                 std::span<const Sinusoid> sinusoids) {
  spec.validate();
  Vector xi0 = Vector::Zero(static_cast<Eigen::Index>(spec.order()));
  if (constant != 0.0) {
    if (!spec.has_constant) throw std::invalid_argument("signal has a constant but the exosystem has none");
    xi0(0) = constant;
  }
  const Eigen::Index offset = spec.has_constant ? 1 : 0;
  for (const auto& s : sinusoids) {
    const auto it = std::find(spec.frequencies.begin(), spec.frequencies.end(), s.omega);
    if (it == spec.frequencies.end())
      throw std::invalid_argument("sinusoid frequency " + std::to_string(s.omega) + " not in exosystem");
    const Eigen::Index k = offset + 2 * (it - spec.frequencies.begin());
    xi0(k) += s.amplitude * std::cos(s.phase);
    xi0(k + 1) += s.amplitude * std::sin(s.phase);
  }
  return Exosystem(spec, std::move(xi0));
}

Exosystem Exosystem::zero(const ExoSpec& spec) {
  return Exosystem(spec, Vector::Zero(static_cast<Eigen::Index>(spec.order())));
}

Exosystem::Sample Exosystem::evolve(double t) const {
  if (t < 0.0) throw std::invalid_argument("exosystem evolve: t must be nonnegative");
  Vector state = rotate_blocks(spec_, xi0_, t);
  const double y = c_.dot(state);
  return {std::move(state), y};
}

double Exosystem::output(double t) const {
  if (t < 0.0) throw std::invalid_argument("exosystem output: t must be nonnegative");
  double y = 0.0;
  Eigen::Index k = 0;
  if (spec_.has_constant) {
    y += c_(0) * xi0_(0);
    k = 1;
  }
  for (double w : spec_.frequencies) {
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    y += c_(k) * (c * xi0_(k) - s * xi0_(k + 1)) + c_(k + 1) * (s * xi0_(k) + c * xi0_(k + 1));
    k += 2;
  }
  return y;
}

namespace {

std::vector<double> verification_grid(const ExoSpec& spec) {
  // Covers one full period of the slowest rotation plus an off-grid tail.
  double horizon = 1.0;
  for (double w : spec.frequencies) horizon = std::max(horizon, 2.0 * M_PI / w);
  std::vector<double> times;
  constexpr int kPoints = 97;
  for (int k = 0; k < kPoints; ++k) times.push_back(horizon * 1.03 * k / (kPoints - 1));
  return times;
}

}  // namespace

std::vector<AuxiliarySystem> equilibrium_init(std::span<const Exosystem> exos, const Laplacian& l_i,
                                              std::span<const Vector> b_list) {
  const std::size_t n = exos.size();
  if (n < 2 || l_i.size() != n || b_list.size() != n)
    throw std::invalid_argument("equilibrium_init: need one exosystem and one B per node");
  const auto& spec = exos.front().spec();
  const RowVector& c = exos.front().c();
  for (const auto& e : exos)
    if (!(e.spec() == spec) || (e.c() - c).cwiseAbs().maxCoeff() != 0.0)
      throw std::invalid_argument("equilibrium_init: exosystems must share (A, C)");

  const Matrix gamma = gamma_pseudoinverse(l_i);
  const Matrix& a = exos.front().a();
  const Matrix o_c = observability_matrix(a, c);

  std::vector<AuxiliarySystem> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector xi_hat = Vector::Zero(a.rows());
    for (std::size_t j = 0; j < n; ++j)
      xi_hat += gamma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * exos[j].xi0();

    const Vector& b = b_list[i];
    if (b.size() != a.rows()) throw std::invalid_argument("equilibrium_init: B dimension mismatch");
    const Matrix o_b = observability_matrix(a, b.transpose());
    Vector z0;
    try {
      z0 = solve(o_b, o_c * xi_hat);
    } catch (const SingularMatrixError&) {
      throw std::invalid_argument("auxiliary pair unobservable at node " + std::to_string(i + 1));
    }
    if (const double cond = condition_number_1(o_b); cond > 1e8)
      std::clog << "warning: near-unobservable auxiliary pair at node " << i + 1
                << " (condition " << cond << ")\n";
    out.push_back({b, std::move(z0)});
  }

  const auto times = verification_grid(spec);
  double scale = 1.0;
  for (const auto& e : exos) scale = std::max(scale, e.xi0().norm());
  const double residual = equilibrium_residual(exos, l_i, out, times);
  if (residual > 1e-8 * scale)
    throw std::logic_error("equilibrium_init: identity violated (residual " + std::to_string(residual) + ")");
  return out;
}

double equilibrium_residual(std::span<const Exosystem> exos, const Laplacian& l_i,
                            std::span<const AuxiliarySystem> aux, std::span<const double> times) {
  const auto n = static_cast<Eigen::Index>(exos.size());
  const Matrix pi = projection_pair(exos.size()).pi;
  const auto& spec = exos.front().spec();
  Vector phi(n), lambda(n);
  double worst = 0.0;
  for (double t : times) {
    for (Eigen::Index i = 0; i < n; ++i) {
      phi(i) = exos[static_cast<std::size_t>(i)].output(t);
      const auto& ax = aux[static_cast<std::size_t>(i)];
      lambda(i) = ax.b.dot(rotate_blocks(spec, ax.z0, t));
    }
    worst = std::max(worst, (pi * phi - l_i.matrix() * lambda).norm());
  }
  return worst;
}

}  // namespace syncnet
