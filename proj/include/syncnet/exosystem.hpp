#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "syncnet/linalg.hpp"
#include "syncnet/netgraph.hpp"

namespace syncnet {

/// Signal class generated by a neutrally stable exosystem: an optional
/// constant plus sinusoids at distinct known frequencies (rad/s).
struct ExoSpec {
  bool has_constant = false;
  std::vector<double> frequencies;

  /// State dimension: (has_constant ? 1 : 0) + 2 * frequencies.size().
  std::size_t order() const noexcept { return (has_constant ? 1 : 0) + 2 * frequencies.size(); }
  void validate() const;

  /// Smallest spec containing both (union of frequencies, constant if either).
  static ExoSpec merge(const ExoSpec& a, const ExoSpec& b);

  friend bool operator==(const ExoSpec&, const ExoSpec&) = default;
};

struct Sinusoid {
  double omega = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;

  friend bool operator==(const Sinusoid&, const Sinusoid&) = default;
};

struct CanonicalPair {
  Matrix a;
  RowVector c;
};

/// Block-diagonal skew-symmetric generator: [0] for the constant, then
/// [[0, -w], [w, 0]] per frequency; C has ones on each block's first coordinate.
CanonicalPair canonical_exosystem(const ExoSpec& spec);

/// Rows row * A^k for k = 0..n-1.
Matrix observability_matrix(const Matrix& a, const RowVector& row);

bool is_observable(const Matrix& a, const RowVector& row);

/// exp(A t) * v for the canonical block structure of `spec`.
Vector rotate_blocks(const ExoSpec& spec, const Vector& v, double t);

/// Autonomous generator xi' = A xi, phi = C xi with canonical block A.
class Exosystem {
 public:
  Exosystem(ExoSpec spec, Vector xi0);
  Exosystem(ExoSpec spec, RowVector c, Vector xi0);

  /// Embeds constant + sinusoids into `spec`. Amplitude a, phase theta of a
  /// sinusoid map to block state [a cos theta, a sin theta], so that with the
  /// canonical output the component reads a cos(w t + theta).
  static Exosystem from_signal(const ExoSpec& spec, double constant,
                               std::span<const Sinusoid> sinusoids);

  static Exosystem zero(const ExoSpec& spec);

  const ExoSpec& spec() const noexcept { return spec_; }
  const Matrix& a() const noexcept { return a_; }
  const RowVector& c() const noexcept { return c_; }
  const Vector& xi0() const noexcept { return xi0_; }

  struct Sample {
    Vector state;
    double output;
  };
  Sample evolve(double t) const;
  double output(double t) const;

 private:
  ExoSpec spec_;
  Matrix a_;
  RowVector c_;
  Vector xi0_;
};

/// Auxiliary system z' = A z, lambda = B^T z.
struct AuxiliarySystem {
  Vector b;
  Vector z0;
};

/// Initial conditions z_i(0) realizing Pi phi(t) = L_I lambda(t) for all t.
///
/// Builds xi_hat_i(0) = sum_j Gamma_ij xi_j(0) with Gamma the pseudoinverse of
/// L_I, then z_i(0) = O_{B_i}^{-1} O_C xi_hat_i(0). All exosystems must share
/// one (A, C). The identity is verified on a time grid before returning.
std::vector<AuxiliarySystem> equilibrium_init(std::span<const Exosystem> exos,
                                              const Laplacian& l_i,
                                              std::span<const Vector> b_list);

/// max over `times` of ||Pi phi(t) - L_I lambda(t)||_2.
double equilibrium_residual(std::span<const Exosystem> exos, const Laplacian& l_i,
                            std::span<const AuxiliarySystem> aux, std::span<const double> times);

}  // namespace syncnet
