#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "countrank/dense_matrix.hpp"

namespace testing_support {

using countrank::DenseMatrix;

inline DenseMatrix gaussian(std::size_t m, std::size_t n, std::mt19937_64& gen, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  DenseMatrix a(m, n);
  for (double& x : a.entries()) x = d(gen);
  return a;
}

inline DenseMatrix uniform(std::size_t m, std::size_t n, std::mt19937_64& gen, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  DenseMatrix a(m, n);
  for (double& x : a.entries()) x = d(gen);
  return a;
}

// Nonnegative rank-r matrix with max entry lambda_max.
inline DenseMatrix low_rank_nonneg(std::size_t m, std::size_t n, std::size_t r, double lambda_max,
                                   std::mt19937_64& gen) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(r));
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = d(gen);
  for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = d(gen);
  Eigen::MatrixXd prod = u * v.transpose();
  prod *= lambda_max / prod.maxCoeff();
  return DenseMatrix(countrank::RowMajorMatrix(prod));
}

// Singular values from the eigenvalues of A^T A (independent of the SVD path). Long double
// keeps the square roots of small eigenvalues accurate.
inline Eigen::Matrix<long double, Eigen::Dynamic, 1> gram_eigenvalues(const DenseMatrix& a) {
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const MatL m = Eigen::MatrixXd(a.view()).cast<long double>();
  Eigen::SelfAdjointEigenSolver<MatL> es(m.transpose() * m);
  return es.eigenvalues();
}

inline double opnorm_oracle(const DenseMatrix& a) {
  return static_cast<double>(std::sqrt(std::max(0.0L, gram_eigenvalues(a).maxCoeff())));
}

inline double nuclear_oracle(const DenseMatrix& a) {
  const auto ev = gram_eigenvalues(a);
  long double s = 0.0L;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s += std::sqrt(std::max(0.0L, ev[i]));
  return static_cast<double>(s);
}

inline double frob_oracle(const DenseMatrix& a, const DenseMatrix& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const long double d = static_cast<long double>(a(i, j)) - b(i, j);
      s += d * d;
    }
  return static_cast<double>(std::sqrt(s));
}

inline double frob_oracle(const DenseMatrix& a) { return frob_oracle(a, DenseMatrix(a.rows(), a.cols())); }

}  // namespace testing_support
