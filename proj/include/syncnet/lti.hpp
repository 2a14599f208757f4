#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

#include "syncnet/linalg.hpp"

namespace syncnet {

/// Real polynomial with ascending coefficients. Coefficients below
/// 1e-12 * max|c| are zeroed and trailing zeros trimmed after every operation.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending);
  Polynomial(std::initializer_list<double> ascending);

  static Polynomial constant(double c) { return Polynomial({c}); }
  static Polynomial monomial(int degree, double coefficient = 1.0);
  /// prod (s - r_k)
  static Polynomial from_roots(const std::vector<double>& roots);

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<double>& coefficients() const noexcept { return c_; }
  double operator[](int k) const noexcept {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : 0.0;
  }
  double leading() const noexcept { return c_.empty() ? 0.0 : c_.back(); }
  bool is_monic(double tol = 1e-12) const noexcept { return !c_.empty() && std::abs(c_.back() - 1.0) <= tol; }
  double max_abs() const noexcept;

  double operator()(double x) const noexcept;
  std::complex<double> operator()(std::complex<double> s) const noexcept;

  Polynomial pow(unsigned n) const;

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(double k, const Polynomial& p);
  friend Polynomial operator-(const Polynomial& p) { return -1.0 * p; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  std::string to_string(char var = 's') const;

 private:
  void normalize();
  std::vector<double> c_;
};

inline Polynomial poly_add(const Polynomial& p, const Polynomial& q) { return p + q; }
inline Polynomial poly_sub(const Polynomial& p, const Polynomial& q) { return p - q; }
inline Polynomial poly_mul(const Polynomial& p, const Polynomial& q) { return p * q; }

struct PolyDivMod {
  Polynomial quotient;
  Polynomial remainder;
};

/// p = q * quotient + remainder with deg remainder < deg q.
PolyDivMod poly_divmod(const Polynomial& p, const Polynomial& q);

/// q | p up to ||rem||_inf <= 1e-9 * ||p||_inf.
bool divides(const Polynomial& q, const Polynomial& p);

enum class Stability { stable, marginal, unstable };

const char* to_string(Stability s) noexcept;

/// Routh-Hurwitz classification. `marginal` covers roots on the imaginary
/// axis (including the origin) with none in the open right half plane.
/// A nonzero constant is stable (no roots).
Stability routh_classify(const Polynomial& p);

/// True iff every root lies in the open left half plane.
bool routh_stable(const Polynomial& p);

class TransferFunction {
 public:
  TransferFunction(Polynomial num, Polynomial den);

  const Polynomial& num() const noexcept { return num_; }
  const Polynomial& den() const noexcept { return den_; }
  /// deg den - deg num (den degree if num is zero).
  int relative_degree() const noexcept;
  bool is_proper() const noexcept { return relative_degree() >= 0; }
  bool is_strictly_proper() const noexcept { return relative_degree() >= 1; }

  std::complex<double> operator()(std::complex<double> s) const;

  friend bool operator==(const TransferFunction&, const TransferFunction&) = default;

 private:
  Polynomial num_;
  Polynomial den_;
};

/// tf(j omega). Throws std::domain_error on a pole at that frequency.
std::complex<double> freq_response(const TransferFunction& tf, double omega);

struct SprReport {
  bool spr = false;
  std::string reason;          // empty when spr
  double min_real_part = 0.0;  // over the sweep grid (and refinements)
  double omega_at_min = 0.0;
};

/// Strict positive realness by Routh test on the denominator, a log sweep of
/// Re tf(j w) over [1e-4, 1e4] at 400 points per decade with golden-section
/// refinement around local minima, and the high-frequency tail condition.
SprReport is_spr(const TransferFunction& tf);

/// Supremum of epsilon > 0 for which n_h / (epsilon d + n_h) is SPR, to 1e-3.
/// Returns +inf when no upper bound is found below 1e6. Throws DesignError
/// when the design fails even at epsilon = 1e-6.
double spr_epsilon_bound(const Polynomial& n_h, const Polynomial& d);

struct StateSpace {
  Matrix a;
  Vector b;
  RowVector c;
  double d = 0.0;

  std::size_t order() const noexcept { return static_cast<std::size_t>(a.rows()); }
  /// C (j w I - A)^{-1} B + D
  std::complex<double> response(double omega) const;
};

/// Controllable canonical realization of a proper transfer function.
StateSpace realize(const TransferFunction& tf);

/// det(sI - A) via Leverrier-Faddeev.
Polynomial characteristic_polynomial(const Matrix& a);

/// c (sI - A)^{-1} b + d as a rational function (Leverrier-Faddeev resolvent).
TransferFunction siso_transfer(const Matrix& a, const Vector& b, const RowVector& c, double d = 0.0);

}  // namespace syncnet
