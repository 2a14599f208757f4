#include "syncnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "syncnet/errors.hpp"

namespace syncnet {

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& v : violations) msg += "\n  " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Matrix& m, bool want_vectors) {
  if (m.rows() != m.cols()) throw std::invalid_argument("jacobi_eigen: matrix is not square");
  const Eigen::Index n = m.rows();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 && n > 0)
    throw std::invalid_argument("jacobi_eigen: matrix is not symmetric");

  Matrix a = 0.5 * (m + m.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double threshold = 1e-12 * std::max(1.0, a.norm());

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps && off_diagonal_norm(a) > threshold; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle chosen so the (p,q) entry vanishes (stable tangent form).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        if (want_vectors) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const double vkp = v(k, p);
            const double vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  if (off_diagonal_norm(a) > threshold)
    throw std::runtime_error("jacobi_eigen: no convergence after 100 sweeps");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    if (want_vectors) out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

Vector symmetric_eigenvalues(const Matrix& m) { return jacobi_eigen(m, false).values; }

Matrix solve(const Matrix& a, const Matrix& rhs) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve: matrix is not square");
  if (rhs.rows() != a.rows()) throw std::invalid_argument("solve: dimension mismatch");
  const Eigen::Index n = a.rows();
  Matrix lu = a;
  Matrix x = rhs;
  const double scale = n > 0 ? a.cwiseAbs().maxCoeff() : 0.0;
  const double tiny = 1e-12 * scale;

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot_row = k;
    lu.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot_row);
    pivot_row += k;
    if (scale == 0.0 || std::abs(lu(pivot_row, k)) < tiny)
      throw SingularMatrixError("matrix is singular to working precision");
    if (pivot_row != k) {
      lu.row(k).swap(lu.row(pivot_row));
      x.row(k).swap(x.row(pivot_row));
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      if (f == 0.0) continue;
      lu.row(i).tail(n - k) -= f * lu.row(k).tail(n - k);
      x.row(i) -= f * x.row(k);
    }
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    for (Eigen::Index j = k + 1; j < n; ++j) x.row(k) -= lu(k, j) * x.row(j);
    x.row(k) /= lu(k, k);
  }
  return x;
}

Matrix inverse(const Matrix& a) { return solve(a, Matrix::Identity(a.rows(), a.cols())); }

int numerical_rank(const Matrix& a, double rel_tol) {
  Matrix r = a;
  const double scale = a.size() > 0 ? a.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) return 0;
  const double tol = rel_tol * scale;
  int rank = 0;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < r.cols() && row < r.rows(); ++col) {
    Eigen::Index p = 0;
    const double best = r.col(col).tail(r.rows() - row).cwiseAbs().maxCoeff(&p);
    if (best <= tol) continue;
    p += row;
    r.row(row).swap(r.row(p));
    for (Eigen::Index i = row + 1; i < r.rows(); ++i) r.row(i) -= (r(i, col) / r(row, col)) * r.row(row);
    ++row;
    ++rank;
  }
  return rank;
}

double condition_number_1(const Matrix& a) {
  auto norm1 = [](const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); };
  try {
    return norm1(a) * norm1(inverse(a));
  } catch (const SingularMatrixError&) {
    return std::numeric_limits<double>::infinity();
  }
}

bool is_skew_symmetric(const Matrix& a, double tol) {
  return a.rows() == a.cols() && (a + a.transpose()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace syncnet
