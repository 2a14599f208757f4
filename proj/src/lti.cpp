#include "syncnet/lti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "syncnet/errors.hpp"

namespace syncnet {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) { normalize(); }

Polynomial::Polynomial(std::initializer_list<double> ascending) : c_(ascending) { normalize(); }

void Polynomial::normalize() {
  double m = 0.0;
  for (double v : c_) {
    if (!std::isfinite(v)) throw std::invalid_argument("polynomial coefficient is not finite");
    m = std::max(m, std::abs(v));
  }
  for (double& v : c_)
    if (std::abs(v) <= 1e-12 * m) v = 0.0;
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Polynomial Polynomial::monomial(int degree, double coefficient) {
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = coefficient;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(const std::vector<double>& roots) {
  Polynomial p({1.0});
  for (double r : roots) p = p * Polynomial({-r, 1.0});
  return p;
}

double Polynomial::max_abs() const noexcept {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const noexcept {
  std::complex<double> acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial out({1.0});
  for (unsigned k = 0; k < n; ++k) out = out * *this;
  return out;
}

Polynomial operator+(const Polynomial& p, const Polynomial& q) {
  std::vector<double> c(std::max(p.c_.size(), q.c_.size()), 0.0);
  for (std::size_t k = 0; k < p.c_.size(); ++k) c[k] += p.c_[k];
  for (std::size_t k = 0; k < q.c_.size(); ++k) c[k] += q.c_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + (-1.0) * q; }

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() || q.is_zero()) return {};
  std::vector<double> c(p.c_.size() + q.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.c_.size(); ++i)
    for (std::size_t j = 0; j < q.c_.size(); ++j) c[i + j] += p.c_[i] * q.c_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(double k, const Polynomial& p) {
  auto c = p.c_;
  for (double& v : c) v *= k;
  return Polynomial(std::move(c));
}

std::string Polynomial::to_string(char var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const double v = c_[static_cast<std::size_t>(k)];
    if (v == 0.0) continue;
    const double mag = std::abs(v);
    if (first) {
      if (v < 0) os << "-";
    } else {
      os << (v < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0 || mag != 1.0) os << mag;
    if (k >= 1) {
      if (mag != 1.0) os << " ";
      os << var;
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

PolyDivMod poly_divmod(const Polynomial& p, const Polynomial& q) {
  if (q.is_zero()) throw std::invalid_argument("polynomial division by zero");
  std::vector<double> rem = p.coefficients();
  const auto& qc = q.coefficients();
  const int dq = q.degree();
  if (p.degree() < dq) return {Polynomial(), p};
  std::vector<double> quot(static_cast<std::size_t>(p.degree() - dq + 1), 0.0);
  for (int k = p.degree(); k >= dq; --k) {
    const double coef = rem[static_cast<std::size_t>(k)] / qc.back();
    const auto shift = static_cast<std::size_t>(k - dq);
    quot[shift] = coef;
    for (std::size_t j = 0; j < qc.size(); ++j) rem[shift + j] -= coef * qc[j];
    rem[static_cast<std::size_t>(k)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(dq));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

bool divides(const Polynomial& q, const Polynomial& p) {
  if (p.is_zero()) return true;
  return poly_divmod(p, q).remainder.max_abs() <= 1e-9 * p.max_abs();
}

// ---------------------------------------------------------------------------
// Routh-Hurwitz

const char* to_string(Stability s) noexcept {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::marginal: return "marginal";
    case Stability::unstable: return "unstable";
  }
  return "?";
}

Stability routh_classify(const Polynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("routh: zero polynomial");
  const auto& c = p.coefficients();

  bool marginal = false;
  std::size_t origin_roots = 0;
  while (c[origin_roots] == 0.0) ++origin_roots;
  if (origin_roots > 0) marginal = true;

  std::vector<double> desc(c.rbegin(), c.rend() - static_cast<std::ptrdiff_t>(origin_roots));
  const std::size_t n = desc.size() - 1;
  if (n == 0) return marginal ? Stability::marginal : Stability::stable;
  if (desc[0] < 0)
    for (double& v : desc) v = -v;

  const std::size_t width = n / 2 + 1;
  std::vector<std::vector<double>> rows(n + 1, std::vector<double>(width + 1, 0.0));
  for (std::size_t k = 0; k <= n; ++k) rows[k % 2][k / 2] = desc[k];

  auto row_max = [](const std::vector<double>& r) {
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
  };

  for (std::size_t r = 1; r <= n; ++r) {
    auto& prev2 = rows[r - 1];
    auto& cur = rows[r];
    if (r >= 2) {
      const auto& prev3 = rows[r - 2];
      for (std::size_t k = 0; k < width; ++k)
        cur[k] = (prev2[0] * prev3[k + 1] - prev3[0] * prev2[k + 1]) / prev2[0];
    }
    const double scale = std::max(row_max(prev2), row_max(cur));
    if (row_max(cur) <= 1e-11 * scale) {
      // Zero row: roots symmetric about the origin. Continue with the
      // derivative of the auxiliary polynomial formed from the row above.
      marginal = true;
      const std::size_t aux_degree = n - (r - 1);
      for (std::size_t k = 0; k < width; ++k) {
        const long power = static_cast<long>(aux_degree) - 2 * static_cast<long>(k);
        cur[k] = power > 0 ? prev2[k] * static_cast<double>(power) : 0.0;
      }
    }
    if (std::abs(cur[0]) <= 1e-10 * std::max(row_max(cur), row_max(prev2)))
      cur[0] = 1e-7 * std::max(row_max(cur), row_max(prev2));
  }

  int sign_changes = 0;
  for (std::size_t r = 1; r <= n; ++r)
    if ((rows[r][0] > 0) != (rows[r - 1][0] > 0)) ++sign_changes;

  if (sign_changes > 0) return Stability::unstable;
  return marginal ? Stability::marginal : Stability::stable;
}

bool routh_stable(const Polynomial& p) { return routh_classify(p) == Stability::stable; }

// ---------------------------------------------------------------------------
// Transfer functions

TransferFunction::TransferFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::invalid_argument("transfer function denominator is zero");
}

int TransferFunction::relative_degree() const noexcept {
  return num_.is_zero() ? den_.degree() : den_.degree() - num_.degree();
}

std::complex<double> TransferFunction::operator()(std::complex<double> s) const {
  return num_(s) / den_(s);
}

std::complex<double> freq_response(const TransferFunction& tf, double omega) {
  const std::complex<double> s(0.0, omega);
  const auto den = tf.den()(s);
  double scale = 0.0;
  double wk = 1.0;
  for (double v : tf.den().coefficients()) {
    scale += std::abs(v) * wk;
    wk *= std::abs(omega);
  }
  if (std::abs(den) <= 1e-13 * scale)
    throw std::domain_error("transfer function has a pole at omega = " + std::to_string(omega));
  return tf.num()(s) / den;
}

namespace {

/// Real and imaginary parts of p(j w) as real polynomials in w.
std::pair<Polynomial, Polynomial> split_on_imaginary_axis(const Polynomial& p) {
  const auto& c = p.coefficients();
  std::vector<double> re(c.size(), 0.0), im(c.size(), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    switch (k % 4) {
      case 0: re[k] = c[k]; break;
      case 1: im[k] = c[k]; break;
      case 2: re[k] = -c[k]; break;
      case 3: im[k] = -c[k]; break;
    }
  }
  return {Polynomial(std::move(re)), Polynomial(std::move(im))};
}

struct RealPartEvaluator {
  Polynomial numer;  // Re(N(jw) conj D(jw))
  Polynomial denom;  // |D(jw)|^2

  explicit RealPartEvaluator(const TransferFunction& tf) {
    const auto [nr, ni] = split_on_imaginary_axis(tf.num());
    const auto [dr, di] = split_on_imaginary_axis(tf.den());
    numer = nr * dr + ni * di;
    denom = dr * dr + di * di;
  }
  double operator()(double w) const { return numer(w) / denom(w); }
};

}  // namespace

SprReport is_spr(const TransferFunction& tf) {
  if (!tf.is_proper()) throw std::invalid_argument("is_spr: improper transfer function");
  SprReport report;
  if (tf.num().is_zero()) {
    report.reason = "zero transfer function";
    return report;
  }
  const int rel = tf.relative_degree();
  if (rel > 1) {
    report.reason = "relative degree exceeds one";
    return report;
  }
  if (const auto st = routh_classify(tf.den()); st != Stability::stable) {
    report.reason = std::string("denominator not Hurwitz (") + to_string(st) + ")";
    return report;
  }

  const RealPartEvaluator re(tf);
  report.min_real_part = re(0.0);
  report.omega_at_min = 0.0;

  constexpr int kPerDecade = 400;
  constexpr int kDecades = 8;
  constexpr int kPoints = kPerDecade * kDecades + 1;
  std::vector<double> logw(kPoints), val(kPoints);
  for (int k = 0; k < kPoints; ++k) {
    logw[static_cast<std::size_t>(k)] = -4.0 + static_cast<double>(k) / kPerDecade;
    val[static_cast<std::size_t>(k)] = re(std::pow(10.0, logw[static_cast<std::size_t>(k)]));
  }
  auto consider = [&](double lw, double v) {
    if (v < report.min_real_part) {
      report.min_real_part = v;
      report.omega_at_min = std::pow(10.0, lw);
    }
  };
  for (int k = 0; k < kPoints; ++k) consider(logw[static_cast<std::size_t>(k)], val[static_cast<std::size_t>(k)]);

  // Golden-section refinement inside each bracketing local minimum.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t k = 1; k + 1 < static_cast<std::size_t>(kPoints); ++k) {
    if (!(val[k] <= val[k - 1] && val[k] <= val[k + 1])) continue;
    double lo = logw[k - 1], hi = logw[k + 1];
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = re(std::pow(10.0, x1)), f2 = re(std::pow(10.0, x2));
    while (hi - lo > 1e-6) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - invphi * (hi - lo);
        f1 = re(std::pow(10.0, x1));
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + invphi * (hi - lo);
        f2 = re(std::pow(10.0, x2));
      }
    }
    consider(x1, f1);
    consider(x2, f2);
  }
  if (!(report.min_real_part > 0.0)) {
    report.reason = "Re h(jw) <= 0 near w = " + std::to_string(report.omega_at_min);
    return report;
  }

  const auto& n = tf.num();
  const auto& d = tf.den();
  const int nd = d.degree();
  if (rel == 0) {
    if (!(n.leading() / d.leading() > 0.0)) {
      report.reason = "Re h(inf) <= 0";
      return report;
    }
  } else {
    // h(s) = b/s + c/s^2 + ... as s -> inf, so w^2 Re h(jw) -> -c.
    const double b = n[nd - 1] / d[nd];
    const double cross = b * d[nd - 1];
    const double tail = (cross - n[nd - 2]) / d[nd];
    const double tol = 1e-9 * (std::abs(cross) + std::abs(n[nd - 2])) / std::abs(d[nd]);
    if (!(b > 0.0)) {
      report.reason = "high-frequency gain is not positive";
      return report;
    }
    if (!(tail > tol)) {
      report.reason = "tail condition lim w^2 Re h(jw) > 0 fails";
      return report;
    }
  }
  report.spr = true;
  return report;
}

double spr_epsilon_bound(const Polynomial& n_h, const Polynomial& d) {
  if (n_h.degree() != d.degree() - 1)
    throw std::invalid_argument("spr_epsilon_bound: n_h must have degree deg(d) - 1");
  auto spr_at = [&](double eps) { return is_spr(TransferFunction(n_h, eps * d + n_h)).spr; };

  if (!spr_at(1e-6)) throw DesignError("design infeasible: h(s) is not SPR even for epsilon = 1e-6");

  double lo = 1e-6;
  double hi = 1.0;
  while (spr_at(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) return std::numeric_limits<double>::infinity();
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (spr_at(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// State space

std::complex<double> StateSpace::response(double omega) const {
  if (a.rows() == 0) return d;
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd m = std::complex<double>(0.0, omega) * Eigen::MatrixXcd::Identity(n, n) - a.cast<std::complex<double>>();
  const Eigen::VectorXcd x = m.partialPivLu().solve(b.cast<std::complex<double>>());
  return (c.cast<std::complex<double>>() * x)(0) + d;
}

StateSpace realize(const TransferFunction& tf) {
  if (!tf.is_proper()) throw std::invalid_argument("realize: improper transfer function");
  const double lead = tf.den().leading();
  const Polynomial den = (1.0 / lead) * tf.den();
  Polynomial num = (1.0 / lead) * tf.num();
  const int n = den.degree();

  StateSpace ss;
  ss.d = num[n];
  const Polynomial rem = num - ss.d * den;
  ss.a = Matrix::Zero(n, n);
  ss.b = Vector::Zero(n);
  ss.c = RowVector::Zero(n);
  for (int k = 0; k + 1 < n; ++k) ss.a(k, k + 1) = 1.0;
  for (int k = 0; k < n; ++k) {
    ss.a(n - 1, k) = -den[k];
    ss.c(k) = rem[k];
  }
  if (n > 0) ss.b(n - 1) = 1.0;
  return ss;
}

namespace {

/// Leverrier-Faddeev: characteristic coefficients plus the adjugate terms M_k,
/// adj(sI - A) = sum_k M_k s^{n-k}.
std::pair<std::vector<double>, std::vector<Matrix>> leverrier_faddeev(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("leverrier_faddeev: matrix is not square");
  const Eigen::Index n = a.rows();
  std::vector<double> coeffs(static_cast<std::size_t>(n) + 1, 0.0);
  coeffs[static_cast<std::size_t>(n)] = 1.0;
  std::vector<Matrix> terms;
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + coeffs[static_cast<std::size_t>(n - k + 1)] * Matrix::Identity(n, n);
    terms.push_back(m);
    coeffs[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
  }
  return {std::move(coeffs), std::move(terms)};
}

}  // namespace

Polynomial characteristic_polynomial(const Matrix& a) { return Polynomial(leverrier_faddeev(a).first); }

TransferFunction siso_transfer(const Matrix& a, const Vector& b, const RowVector& c, double d) {
  const auto [coeffs, terms] = leverrier_faddeev(a);
  const Eigen::Index n = a.rows();
  if (b.size() != n || c.size() != n) throw std::invalid_argument("siso_transfer: dimension mismatch");
  std::vector<double> num(static_cast<std::size_t>(n) + 1, 0.0);
  for (Eigen::Index k = 1; k <= n; ++k) num[static_cast<std::size_t>(n - k)] = c * terms[static_cast<std::size_t>(k - 1)] * b;
  Polynomial den(coeffs);
  return TransferFunction(Polynomial(std::move(num)) + d * den, den);
}

}  // namespace syncnet
