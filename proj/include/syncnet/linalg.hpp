#pragma once

#include <Eigen/Dense>

namespace syncnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns orthonormal; empty when not requested
};

/// Cyclic Jacobi eigensolver for small dense symmetric matrices.
///
/// Sweeps until the off-diagonal Frobenius norm drops below 1e-12 (scaled by
/// max(1, ||M||_F)), at most 100 sweeps. Rejects input whose asymmetry exceeds
/// 1e-10.
SymmetricEigen jacobi_eigen(const Matrix& m, bool want_vectors = true);

/// Ascending eigenvalues of a symmetric matrix.
Vector symmetric_eigenvalues(const Matrix& m);

/// Solves a * x = rhs by Gaussian elimination with partial pivoting.
/// Throws SingularMatrixError when a pivot falls below 1e-12 * max|a_ij|.
Matrix solve(const Matrix& a, const Matrix& rhs);

Matrix inverse(const Matrix& a);

/// Rank by row-echelon reduction with relative tolerance.
int numerical_rank(const Matrix& a, double rel_tol = 1e-10);

/// 1-norm condition number ||A||_1 * ||A^-1||_1; +inf if singular.
double condition_number_1(const Matrix& a);

bool is_skew_symmetric(const Matrix& a, double tol = 1e-12);

}  // namespace syncnet
