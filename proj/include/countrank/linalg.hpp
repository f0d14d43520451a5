#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "countrank/dense_matrix.hpp"

namespace countrank {

/// Thin SVD: left is m x k, right is n x k, k = min(m, n). Singular values are
/// nonincreasing. Signs of singular vector pairs are not normalized.
struct SvdFactorization {
  DenseMatrix left;
  std::vector<double> singular_values;
  DenseMatrix right;

  /// left * diag(singular_values) * right^T
  DenseMatrix reconstruct() const;
};

/// Throws NumericalError when the bidiagonal iteration fails to converge.
SvdFactorization svd(const DenseMatrix& a);
/// Singular values only (nonincreasing); cheaper than svd().
std::vector<double> singular_values(const DenseMatrix& a);

double frobenius_norm(const DenseMatrix& a);
double operator_norm(const DenseMatrix& a);
double nuclear_norm(const DenseMatrix& a);

/// Number of singular values above rel_tol * sigma_max (0 for the zero matrix).
std::size_t numerical_rank(std::span<const double> singular_values, double rel_tol = 1e-10);
std::size_t numerical_rank(const DenseMatrix& a, double rel_tol = 1e-10);

/// Trace inner product <A, B>.
double inner_product(const DenseMatrix& a, const DenseMatrix& b);
/// ||A - B||_F
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);
/// A - s * B
DenseMatrix scaled_difference(const DenseMatrix& a, const DenseMatrix& b, double s);
DenseMatrix scaled(DenseMatrix a, double s);

/// A_Omega: entries of `a` at the mask cells, in mask order.
std::vector<double> apply_mask(const DenseMatrix& a, const Mask& mask);
/// A_Omega^*: zero matrix with `values` placed at the mask cells.
DenseMatrix mask_adjoint(const Mask& mask, std::span<const double> values);
DenseMatrix mask_adjoint(const MaskedObservations& obs);

/// Dense-times-dense and the scaled-row helper used by the weighted estimators.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale_rows(DenseMatrix a, std::span<const double> factors);

}  // namespace countrank
