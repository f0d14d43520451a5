#pragma once

// Closed-form error guarantees and minimax rates for low-rank Poisson and
// multinomial estimation. C and C0 are unspecified universal constants; they
// are configuration, and every report echoes the values used.

#include <cstddef>
#include <cstdint>
#include <string>

#include "countrank/dense_matrix.hpp"
#include "countrank/estimators.hpp"

namespace countrank {

struct BoundConfig {
  static constexpr double kDefaultC0 = 8.0;
  /// 4 * sqrt(C0): makes the third term of A equal 2K sqrt(C0 log((m v n)/eps)) with
  /// K = max{2 lambda_max, 8 log(2mn/eps)}, the truncation level of the Poisson tail argument.
  static double default_c(double c0 = kDefaultC0);

  double C = default_c();
  double C0 = kDefaultC0;
  double epsilon = 0.1;

  void validate() const;
};

/// max_i sqrt(sum_j M_ij + (1-p) M_ij^2) + max_j sqrt(sum_i M_ij + (1-p) M_ij^2)
double sigma_tilde(const DenseMatrix& m, double p);
/// Row/column root-sum of var(Z_ij) = p M_ij + p(1-p) M_ij^2 for Z = A_Omega^*(X) - pM.
/// Equals sqrt(p) * sigma_tilde(M, p).
double variance_matrix_sigma(const DenseMatrix& m, double p);

/// A(M, p, eps) = 2 sqrt(p) sigma_tilde + 8 eps / sqrt(mn)
///               + C max{lambda_max, 4 log(2mn/eps)} sqrt(log((m v n)/eps))
double opnorm_bound_A(const DenseMatrix& m, double p, const BoundConfig& cfg);
/// Same formula from summary statistics (used by plug-in tuning).
double opnorm_bound_A(std::size_t rows, std::size_t cols, double sigma_tilde_value, double lambda_max,
                      double p, const BoundConfig& cfg);

/// Frobenius-error guarantee for `kind`: 4 sqrt(2r) delta / p (dantzig), 2 sqrt(2r) lambda / p^2
/// (regls), 2 sqrt(2r) A / p (rank_trunc), 4 sqrt(2r) delta (both multinomial kinds; the row
/// kind bounds ||D^{1/2}(P_hat - P)||_F). `value` is delta, lambda or A accordingly.
double upper_bound(EstimatorKind kind, std::size_t r, double p, double value);

/// Deviation bound for bounded entries: P(||X|| >= 2 sigma + t) <= (m v n) exp(-t^2 / (C0 b^2)).
double bounded_entries_tail(std::size_t rows, std::size_t cols, double b, double t, double c0);

/// Truncation extension to sub-exponential entries with P(|X_ij| >= t) <= 2 exp(-t/v) for t >= t0.
struct SubexponentialDeviation {
  double truncation_level = 0.0;  ///< K = max{t0, v log(2mn/eps)}
  double threshold = 0.0;         ///< 2 sigma + eps v / sqrt(mn) + t
  double probability = 0.0;       ///< (m v n) exp(-t^2 / (C0 (2K)^2)) + eps, may exceed 1
};
SubexponentialDeviation subexponential_deviation(std::size_t rows, std::size_t cols, double sigma,
                                                 double v, double t0, double epsilon, double t,
                                                 double c0);

/// min{1, exp(-t^2 / (2(lambda + t/3))), [t >= lambda] exp(-3t/8)} bounding P(X - lambda >= t).
double poisson_tail_bound(double lambda, double t);

/// KL(Poisson(lambda) || Poisson(lambda')); 0 log 0 = 0 and +inf when lambda > 0 = lambda'.
double poisson_kl(double lambda, double lambda_prime);

/// max{2 sqrt(max{1, max_col_sum} log((m+n)/eps)), 4/(3 sqrt(D_min)) log((m+n)/eps)}
double delta_row_multinomial(double max_col_sum, double d_min, std::size_t rows, std::size_t cols,
                             double epsilon);
/// delta_row_multinomial evaluated on a row-stochastic P with trial counts N_i.
double delta_row_multinomial(const DenseMatrix& probabilities, std::int64_t d_min, double epsilon);

/// Admissible delta for the matrix-multinomial estimator at confidence 1 - eps, from the row
/// sums (a/m), column sums (b/n) and largest entry (c) of P.
double delta_matrix_multinomial(const DenseMatrix& probabilities, std::int64_t trials, double epsilon,
                                double c);

struct VarianceLowerBound {
  double radius = 0.0;       ///< sqrt(r) sigma1 / (8 sqrt(2p))
  double probability = 0.0;  ///< 1/2 - 8 log 2 / (m v n)
  bool vacuous = false;      ///< probability <= 0
};
VarianceLowerBound lower_bound_variance_rate(std::size_t r, double p, double sigma1, std::size_t rows,
                                             std::size_t cols);

struct SquaredLowerBound {
  double rate = 0.0;      ///< (1/64) ((1-p)/p) r sigma2^2
  double max_form = 0.0;  ///< max{floor(1/2p)/2, 1-p} r sigma2^2 / 8
  bool valid = true;      ///< p >= r / (2 (m ^ n))
};
SquaredLowerBound lower_bound_squared_rate(std::size_t r, double p, double sigma2, std::size_t rows,
                                           std::size_t cols);

/// Sample-size conditions under which the variance term dominates A, with unit constants.
struct RegimeReport {
  std::string regime;  ///< "lambda_max_ge_log_m" or "lambda_max_lt_log_m"
  double log_m = 0.0;  ///< log(m v n)
  double threshold = 0.0;
  bool satisfied = false;
  double slack = 0.0;  ///< p / threshold
};
RegimeReport matching_regime_check(std::size_t rows, std::size_t cols, std::size_t r, double p,
                                   double lambda_max);

/// Smallest sigma1 (resp. sigma2) whose row/column-sum class contains M.
double class_sigma1(const DenseMatrix& m);
double class_sigma2(const DenseMatrix& m);

struct BoundReport {
  std::size_t rows = 0, cols = 0, rank = 0;
  double p = 1.0, lambda_max = 0.0, epsilon = 0.0, C = 0.0, C0 = 0.0;

  double sigma_tilde = 0.0;
  double A_value = 0.0;
  double ub_dantzig = 0.0;     ///< delta = A
  double ub_regls = 0.0;       ///< lambda = 2pA
  double ub_rank_trunc = 0.0;  ///< A
  double sigma1 = 0.0, sigma2 = 0.0;
  double lb_variance_radius = 0.0;
  double lb_variance_prob = 0.0;
  bool lb_variance_vacuous = false;
  double lb_squared = 0.0;
  double lb_squared_max_form = 0.0;
  bool lb_squared_valid = true;
  RegimeReport regime;
};

/// Evaluates every quantity on M; rank 0 means "use the numerical rank of M".
BoundReport bound_report(const DenseMatrix& m, double p, std::size_t rank, const BoundConfig& cfg);

}  // namespace countrank
