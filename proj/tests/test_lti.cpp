#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "syncnet/errors.hpp"
#include "syncnet/lti.hpp"

using namespace syncnet;
using cd = std::complex<double>;

namespace {

const Polynomial kNh{0.16, 0.8, 1.0};      // (s + 0.4)^2
const Polynomial kD{0.0, 4.0, 0.0, 1.0};   // s^3 + 4 s

TransferFunction dac_h(double eps) { return TransferFunction(kNh, eps * kD + kNh); }

bool same(const Polynomial& p, const Polynomial& q, double tol = 1e-14) {
  if (p.degree() != q.degree()) return false;
  for (int k = 0; k <= p.degree(); ++k)
    if (std::abs(p[k] - q[k]) > tol) return false;
  return true;
}

double rel_err(cd a, cd b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("polynomial arithmetic") {
  CHECK(same(Polynomial{0.4, 1.0} * Polynomial{0.4, 1.0}, kNh));
  CHECK((Polynomial{1.0, 2.0} * Polynomial{}).is_zero());
  CHECK((Polynomial{4.0, 0.0, 1.0} * Polynomial::monomial(1)) == kD);
  CHECK(Polynomial{}.degree() == -1);
  CHECK(Polynomial{1.0, 0.0, 0.0}.degree() == 0);
  CHECK(Polynomial({1.0, 2.0, 1e-14}).degree() == 1);
  CHECK((Polynomial{1, 2, 3} - Polynomial{1, 2, 3}).is_zero());
  CHECK(Polynomial::from_roots({1.0, -2.0}) == Polynomial{-2.0, 1.0, 1.0});
  CHECK(same(Polynomial{0.4, 1.0}.pow(2), kNh));
  CHECK(kD(2.0) == 16.0);
  CHECK(kD(cd(0.0, 2.0)) == cd(0.0, 0.0));
  CHECK(kNh.to_string() == "s^2 + 0.8 s + 0.16");
}

TEST_CASE("polynomial division") {
  SUBCASE("construction identity of the estimator") {
    const auto dh = 0.01 * kD + kNh;
    const auto r = poly_divmod(kNh - dh, kD);
    CHECK(r.remainder.max_abs() <= 1e-15);
    CHECK(divides(kD, kNh - dh));
    REQUIRE(r.quotient.degree() == 0);
    CHECK(r.quotient[0] == doctest::Approx(-0.01));
  }
  SUBCASE("s^2 / s") {
    const auto r = poly_divmod(Polynomial{0, 0, 1}, Polynomial{0, 1});
    CHECK(r.quotient == Polynomial{0, 1});
    CHECK(r.remainder.is_zero());
  }
  SUBCASE("(s^2 + 1) / (s + 1)") {
    const auto r = poly_divmod(Polynomial{1, 0, 1}, Polynomial{1, 1});
    CHECK(r.quotient == Polynomial{-1, 1});
    CHECK(r.remainder == Polynomial{2});
  }
  CHECK_THROWS(poly_divmod(Polynomial{1, 1}, Polynomial{}));
  CHECK(divides(Polynomial{1, 1}, Polynomial{1, 2, 1}));
  CHECK_FALSE(divides(Polynomial{1, 1}, Polynomial{1, 0, 1}));
}

// Reconstruction error is measured against the size of the product q * quotient,
// which is what rounding scales with when the divisor's leading term is small.
TEST_CASE("divmod reconstruction on random polynomials") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> deg(0, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> pc(static_cast<std::size_t>(deg(rng) + 1)), qc(static_cast<std::size_t>(deg(rng) + 1));
    for (auto& c : pc) c = u(rng);
    for (auto& c : qc) c = u(rng);
    const Polynomial p(pc), q(qc);
    const auto r = poly_divmod(p, q);
    CHECK(r.remainder.degree() < q.degree());
    const auto back = q * r.quotient + r.remainder;
    const double scale = std::max(1.0, q.max_abs() * r.quotient.max_abs());
    for (int k = 0; k <= std::max(p.degree(), back.degree()); ++k)
      worst = std::max(worst, std::abs(back[k] - p[k]) / scale);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("routh classification") {
  CHECK(routh_stable(Polynomial{1, 1, 1}));
  CHECK_FALSE(routh_stable(Polynomial{-1, 0, 1}));
  CHECK(routh_classify(Polynomial{-1, 0, 1}) == Stability::unstable);
  CHECK_FALSE(routh_stable(kD));
  CHECK(routh_classify(kD) == Stability::marginal);
  CHECK(routh_classify(Polynomial{0, 1}) == Stability::marginal);
  CHECK(routh_classify(Polynomial{1, 0, 1}) == Stability::marginal);
  CHECK(routh_classify(Polynomial{3}) == Stability::stable);
  CHECK(routh_classify(Polynomial{1, 0, 2, 0, 1}) != Stability::stable);  // (s^2 + 1)^2
  CHECK(routh_classify(Polynomial{6, 11, 6, 1}) == Stability::stable);
  CHECK(routh_classify(Polynomial{-6, 11, -6, 1}) == Stability::unstable);
  CHECK(routh_classify(-1.0 * Polynomial{6, 11, 6, 1}) == Stability::stable);
}

TEST_CASE("routh agrees with a root-finder oracle") {
  int compared = 0, skipped = 0, disagreements = 0;
  const int vals[] = {-2, -1, 0, 1, 2};
  for (int degree = 1; degree <= 4; ++degree) {
    const int combos = static_cast<int>(std::pow(5, degree));
    for (int lead : {-2, -1, 1, 2})
      for (int code = 0; code < combos; ++code) {
        std::vector<double> c(static_cast<std::size_t>(degree + 1));
        int rest = code;
        for (int k = 0; k < degree; ++k, rest /= 5) c[static_cast<std::size_t>(k)] = vals[rest % 5];
        c[static_cast<std::size_t>(degree)] = lead;
        const auto roots = oracle::durand_kerner(c);
        bool marginal = false, all_left = true;
        for (const auto& r : roots) {
          if (std::abs(r.real()) < 1e-6) marginal = true;
          if (r.real() >= 0) all_left = false;
        }
        if (marginal) {
          ++skipped;
          continue;
        }
        ++compared;
        const Polynomial p(c);
        const auto cls = routh_classify(p);
        if (routh_stable(p) != all_left || (cls == Stability::stable) != all_left ||
            (!all_left && cls != Stability::unstable))
          ++disagreements;
      }
  }
  CHECK(compared > 1000);
  CHECK(skipped > 0);
  CHECK(disagreements == 0);
}

TEST_CASE("frequency response") {
  const TransferFunction lag(Polynomial{1}, Polynomial{1, 1});
  CHECK(std::abs(freq_response(lag, 1.0) - cd(0.5, -0.5)) < 1e-15);
  const TransferFunction tf(Polynomial{3, 1}, Polynomial{2, 5, 1});
  CHECK(freq_response(tf, 0.0) == cd(1.5, 0.0));
  CHECK_THROWS_AS(freq_response(TransferFunction(Polynomial{1}, Polynomial{0, 1}), 0.0), std::domain_error);
  CHECK(std::abs(freq_response(dac_h(0.01), 2.0) - 1.0) < 1e-12);
  CHECK(std::abs(freq_response(dac_h(0.01), 0.0) - 1.0) < 1e-12);
}

TEST_CASE("transfer function shape") {
  CHECK(TransferFunction(Polynomial{1}, Polynomial{1, 1}).relative_degree() == 1);
  CHECK(TransferFunction(Polynomial{1, 1}, Polynomial{1, 1}).is_proper());
  CHECK_FALSE(TransferFunction(Polynomial{1, 1, 1}, Polynomial{1, 1}).is_proper());
  CHECK_THROWS(TransferFunction(Polynomial{1}, Polynomial{}));
}

TEST_CASE("strict positive realness") {
  CHECK(is_spr(TransferFunction(Polynomial{1}, Polynomial{1, 1})).spr);
  CHECK_FALSE(is_spr(TransferFunction(Polynomial{1}, Polynomial{0, 1})).spr);
  CHECK(is_spr(dac_h(0.01)).spr);
  CHECK(is_spr(dac_h(1e-4)).spr);
  CHECK_FALSE(is_spr(dac_h(2.0)).spr);
  CHECK_FALSE(is_spr(TransferFunction(Polynomial{1}, Polynomial{1, 1, 1})).spr);
  CHECK_FALSE(is_spr(TransferFunction(Polynomial{-1}, Polynomial{1, 1})).spr);
  CHECK(is_spr(TransferFunction(Polynomial{2, 1}, Polynomial{1, 1})).spr);
  CHECK(is_spr(TransferFunction(Polynomial{0.5, 1}, Polynomial{1, 1, 1})).spr);
  // Re h(jw) = 1 / |D|^2 > 0 but w^2 Re h -> 0: positive real, not strictly.
  CHECK_FALSE(is_spr(TransferFunction(Polynomial{1, 1}, Polynomial{1, 1, 1})).spr);
  CHECK_FALSE(is_spr(TransferFunction(Polynomial{2, 1}, Polynomial{1, 1, 1})).spr);
  CHECK_FALSE(is_spr(TransferFunction(Polynomial{0.1, 1}, Polynomial{1, 0.1, 1})).spr);
  CHECK_THROWS_AS(is_spr(TransferFunction(Polynomial{1, 1, 1}, Polynomial{1, 1})), std::invalid_argument);
}

TEST_CASE("spr epsilon bound") {
  const double bound = spr_epsilon_bound(kNh, kD);
  CHECK(bound == doctest::Approx(1.25).epsilon(0.05));
  CHECK(is_spr(dac_h(bound * 0.98)).spr);
  CHECK_FALSE(is_spr(dac_h(bound * 1.02)).spr);
  CHECK_THROWS_AS(spr_epsilon_bound(Polynomial{-0.16, 0.0, 1.0}, kD), DesignError);
  CHECK(std::isinf(spr_epsilon_bound(Polynomial{1.0}, Polynomial{0.0, 1.0})));
}

TEST_CASE("spr implies a stable denominator") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int spr_count = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Polynomial num{u(rng), 1.0};
    const Polynomial den{u(rng), u(rng), 1.0};
    const TransferFunction tf(num, den);
    if (is_spr(tf).spr) {
      ++spr_count;
      CHECK(routh_stable(den));
    }
  }
  CHECK(spr_count > 10);
}

TEST_CASE("realization") {
  SUBCASE("first-order lag") {
    const auto ss = realize(TransferFunction(Polynomial{1}, Polynomial{1, 1}));
    REQUIRE(ss.order() == 1);
    CHECK(ss.a(0, 0) == -1.0);
    CHECK(ss.b(0) == 1.0);
    CHECK(ss.c(0) == 1.0);
    CHECK(ss.d == 0.0);
  }
  SUBCASE("biproper constant") {
    const auto ss = realize(TransferFunction(Polynomial{1}, Polynomial{1}));
    CHECK(ss.order() == 0);
    CHECK(ss.d == 1.0);
  }
  SUBCASE("estimator agent") {
    const auto h = dac_h(0.01);
    const auto ss = realize(h);
    CHECK(ss.order() == 3);
    for (double w : {0.1, 1.0, 2.0, 10.0}) CHECK(rel_err(ss.response(w), freq_response(h, w)) <= 1e-8);
  }
  CHECK_THROWS(realize(TransferFunction(Polynomial{1, 1, 1}, Polynomial{1, 1})));
}

TEST_CASE("realization matches the transfer function on random systems") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> deg(1, 6);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = deg(rng);
    std::vector<double> den(static_cast<std::size_t>(n + 1)), num(static_cast<std::size_t>(n + (trial % 2 ? 0 : 1)));
    for (auto& c : den) c = u(rng);
    den.back() = 0.5 + std::abs(u(rng));
    for (auto& c : num) c = u(rng);
    const TransferFunction tf{Polynomial(num), Polynomial(den)};
    const auto ss = realize(tf);
    for (int k = 0; k < 10; ++k) {
      const double w = std::pow(10.0, -2.0 + 0.45 * k) * 1.0137;
      worst = std::max(worst, rel_err(ss.response(w), freq_response(tf, w)));
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("characteristic polynomial and resolvent") {
  Matrix a(3, 3);
  a << 0, 0, 0, 0, 0, -2, 0, 2, 0;
  CHECK(characteristic_polynomial(a) == kD);
  CHECK(characteristic_polynomial(Matrix::Zero(1, 1)) == (Polynomial{0, 1}));
  Matrix r(2, 2);
  r << 0, -1, 1, 0;
  CHECK(characteristic_polynomial(r) == (Polynomial{1, 0, 1}));

  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 5;
    Matrix m(n, n);
    Vector b(n);
    RowVector c(n);
    for (int i = 0; i < n; ++i) {
      b(i) = u(rng), c(i) = u(rng);
      for (int j = 0; j < n; ++j) m(i, j) = u(rng);
    }
    const auto tf = siso_transfer(m, b, c, 0.3);
    const StateSpace ss{m, b, c, 0.3};
    for (double w : {0.05, 0.7, 3.0, 40.0}) CHECK(rel_err(freq_response(tf, w), ss.response(w)) <= 1e-9);
    const auto roots = oracle::durand_kerner(characteristic_polynomial(m).coefficients());
    for (const auto& z : roots) CHECK(std::abs((z * Matrix::Identity(n, n).cast<cd>() - m.cast<cd>()).determinant()) < 1e-8);
  }
}
