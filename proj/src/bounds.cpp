#include "countrank/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "countrank/error.hpp"
#include "countrank/kernels.hpp"
#include "countrank/linalg.hpp"

namespace countrank {
namespace {

void check_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DataError("sampling probability p must lie in (0, 1]");
}

// max_i sqrt(sum_j a M + b M^2) + max_j sqrt(sum_i a M + b M^2)
double row_col_root_sums(const DenseMatrix& m, double a, double b) {
  std::vector<double> col(m.cols(), 0.0);
  double row_max = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    row_max = std::max(row_max, kernels::poly_sum(m.row(i), a, b));
    kernels::poly_accumulate(m.row(i), a, b, col);
  }
  const double col_max = *std::max_element(col.begin(), col.end());
  return std::sqrt(std::max(row_max, 0.0)) + std::sqrt(std::max(col_max, 0.0));
}

double max_entry(const DenseMatrix& m) {
  return *std::max_element(m.entries().begin(), m.entries().end());
}

double max_col_sum(const DenseMatrix& m) {
  std::vector<double> col(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) kernels::poly_accumulate(m.row(i), 1.0, 0.0, col);
  return *std::max_element(col.begin(), col.end());
}

double max_row_sum(const DenseMatrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) best = std::max(best, kernels::poly_sum(m.row(i), 1.0, 0.0));
  return best;
}

}  // namespace

double BoundConfig::default_c(double c0) { return 4.0 * std::sqrt(c0); }

void BoundConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DataError("epsilon must lie in (0, 1/2)");
  if (!(C > 0.0) || !(C0 > 0.0)) throw DataError("constants C and C0 must be positive");
}

double sigma_tilde(const DenseMatrix& m, double p) {
  check_p(p);
  return row_col_root_sums(m, 1.0, 1.0 - p);
}

double variance_matrix_sigma(const DenseMatrix& m, double p) {
  check_p(p);
  return row_col_root_sums(m, p, p * (1.0 - p));
}

double opnorm_bound_A(std::size_t rows, std::size_t cols, double sigma_tilde_value, double lambda_max,
                      double p, const BoundConfig& cfg) {
  check_p(p);
  cfg.validate();
  const double mn = static_cast<double>(rows) * static_cast<double>(cols);
  const double big = static_cast<double>(std::max(rows, cols));
  const double eps = cfg.epsilon;
  return 2.0 * std::sqrt(p) * sigma_tilde_value + 8.0 * eps / std::sqrt(mn) +
         cfg.C * std::max(lambda_max, 4.0 * std::log(2.0 * mn / eps)) * std::sqrt(std::log(big / eps));
}

double opnorm_bound_A(const DenseMatrix& m, double p, const BoundConfig& cfg) {
  return opnorm_bound_A(m.rows(), m.cols(), sigma_tilde(m, p), max_entry(m), p, cfg);
}

double upper_bound(EstimatorKind kind, std::size_t r, double p, double value) {
  check_p(p);
  if (r == 0) throw DataError("rank must be >= 1");
  const double root = std::sqrt(2.0 * static_cast<double>(r));
  switch (kind) {
    case EstimatorKind::dantzig: return 4.0 * root * value / p;
    case EstimatorKind::regls: return 2.0 * root * value / (p * p);
    case EstimatorKind::rank_trunc: return 2.0 * root * value / p;
    case EstimatorKind::multinomial_matrix:
    case EstimatorKind::multinomial_rows: return 4.0 * root * value;
  }
  throw DataError("unknown estimator kind");
}

double bounded_entries_tail(std::size_t rows, std::size_t cols, double b, double t, double c0) {
  const double big = static_cast<double>(std::max(rows, cols));
  return big * std::exp(-t * t / (c0 * b * b));
}

SubexponentialDeviation subexponential_deviation(std::size_t rows, std::size_t cols, double sigma,
                                                 double v, double t0, double epsilon, double t,
                                                 double c0) {
  const double mn = static_cast<double>(rows) * static_cast<double>(cols);
  SubexponentialDeviation out;
  out.truncation_level = std::max(t0, v * std::log(2.0 * mn / epsilon));
  out.threshold = 2.0 * sigma + epsilon * v / std::sqrt(mn) + t;
  out.probability = bounded_entries_tail(rows, cols, 2.0 * out.truncation_level, t, c0) + epsilon;
  return out;
}

double poisson_tail_bound(double lambda, double t) {
  if (!(lambda >= 0.0)) throw DataError("Poisson rate must be >= 0");
  if (!(t >= 0.0)) throw DataError("tail offset t must be >= 0");
  double bound = std::min(1.0, std::exp(-t * t / (2.0 * (lambda + t / 3.0))));
  if (t >= lambda) bound = std::min(bound, std::exp(-3.0 * t / 8.0));
  return bound;
}

double poisson_kl(double lambda, double lambda_prime) {
  if (!(lambda >= 0.0) || !(lambda_prime >= 0.0)) throw DataError("Poisson rates must be >= 0");
  if (lambda == 0.0) return lambda_prime;
  if (lambda_prime == 0.0) return std::numeric_limits<double>::infinity();
  // lambda' - lambda + lambda log(lambda/lambda'), written to stay >= 0 near equality.
  const double x = lambda_prime / lambda;
  return lambda * (x - 1.0 - std::log(x));
}

double delta_row_multinomial(double max_col_sum_value, double d_min, std::size_t rows,
                             std::size_t cols, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DataError("epsilon must lie in (0, 1)");
  if (!(d_min > 0.0)) throw DataError("D_min must be positive");
  const double log_term = std::log(static_cast<double>(rows + cols) / epsilon);
  return std::max(2.0 * std::sqrt(std::max(1.0, max_col_sum_value) * log_term),
                  4.0 / (3.0 * std::sqrt(d_min)) * log_term);
}

double delta_row_multinomial(const DenseMatrix& probabilities, std::int64_t d_min, double epsilon) {
  return delta_row_multinomial(max_col_sum(probabilities), static_cast<double>(d_min),
                               probabilities.rows(), probabilities.cols(), epsilon);
}

double delta_matrix_multinomial(const DenseMatrix& probabilities, std::int64_t trials, double epsilon,
                                double c) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DataError("epsilon must lie in (0, 1)");
  if (trials < 1) throw DataError("N must be >= 1");
  const double n_trials = static_cast<double>(trials);
  const double m = static_cast<double>(probabilities.rows());
  const double n = static_cast<double>(probabilities.cols());
  const double big = std::max(m, n);
  const double e = std::numbers::e;
  const double root_n = std::sqrt(n_trials);
  const double row_term = max_row_sum(probabilities);  // a / m
  const double col_term = max_col_sum(probabilities);  // b / n
  const double entry = max_entry(probabilities);
  const double total = 2.0 * std::sqrt(n_trials * (row_term + col_term)) +
                       4.0 * epsilon / (e * std::sqrt(m * n * n_trials)) +
                       c * std::max(n_trials * entry, 4.0 * std::log(4.0 * e * m * n * root_n / epsilon)) *
                           std::sqrt(std::log(2.0 * e * root_n * big / epsilon));
  return total / n_trials;
}

VarianceLowerBound lower_bound_variance_rate(std::size_t r, double p, double sigma1, std::size_t rows,
                                             std::size_t cols) {
  check_p(p);
  if (r == 0 || !(sigma1 > 0.0)) throw DataError("r and sigma1 must be positive");
  VarianceLowerBound out;
  out.radius = std::sqrt(static_cast<double>(r)) * sigma1 / (8.0 * std::sqrt(2.0 * p));
  out.probability = 0.5 - 8.0 * std::numbers::ln2 / static_cast<double>(std::max(rows, cols));
  out.vacuous = out.probability <= 0.0;
  return out;
}

SquaredLowerBound lower_bound_squared_rate(std::size_t r, double p, double sigma2, std::size_t rows,
                                           std::size_t cols) {
  check_p(p);
  if (r == 0 || !(sigma2 > 0.0)) throw DataError("r and sigma2 must be positive");
  const double rs2 = static_cast<double>(r) * sigma2 * sigma2;
  SquaredLowerBound out;
  out.rate = (1.0 / 64.0) * ((1.0 - p) / p) * rs2;
  out.max_form = std::max(0.5 * std::floor(1.0 / (2.0 * p)), 1.0 - p) * rs2 / 8.0;
  out.valid = p >= static_cast<double>(r) / (2.0 * static_cast<double>(std::min(rows, cols)));
  return out;
}

RegimeReport matching_regime_check(std::size_t rows, std::size_t cols, std::size_t r, double p,
                                   double lambda_max) {
  check_p(p);
  if (!(lambda_max > 0.0)) throw DataError("lambda_max must be positive");
  const double m = static_cast<double>(std::max(rows, cols));
  RegimeReport out;
  out.log_m = std::log(m);
  if (lambda_max >= out.log_m) {
    out.regime = "lambda_max_ge_log_m";
    out.threshold = static_cast<double>(r) * out.log_m / m;
  } else {
    out.regime = "lambda_max_lt_log_m";
    out.threshold = static_cast<double>(r) * std::pow(out.log_m, 3) / (m * lambda_max * lambda_max);
  }
  out.satisfied = p >= out.threshold;
  out.slack = p / out.threshold;
  return out;
}

double class_sigma1(const DenseMatrix& m) {
  return 0.5 * (std::sqrt(max_row_sum(m)) + std::sqrt(max_col_sum(m)));
}

double class_sigma2(const DenseMatrix& m) {
  return 0.5 * row_col_root_sums(m, 0.0, 1.0);
}

BoundReport bound_report(const DenseMatrix& m, double p, std::size_t rank, const BoundConfig& cfg) {
  check_p(p);
  cfg.validate();
  for (double v : m.entries()) {
    if (v < 0.0) throw DataError("rate matrix must be nonnegative");
  }
  BoundReport rep;
  rep.rows = m.rows();
  rep.cols = m.cols();
  rep.rank = rank == 0 ? std::max<std::size_t>(1, numerical_rank(m)) : rank;
  rep.p = p;
  rep.lambda_max = max_entry(m);
  rep.epsilon = cfg.epsilon;
  rep.C = cfg.C;
  rep.C0 = cfg.C0;

  rep.sigma_tilde = sigma_tilde(m, p);
  rep.A_value = opnorm_bound_A(m, p, cfg);
  rep.ub_dantzig = upper_bound(EstimatorKind::dantzig, rep.rank, p, rep.A_value);
  rep.ub_regls = upper_bound(EstimatorKind::regls, rep.rank, p, 2.0 * p * rep.A_value);
  rep.ub_rank_trunc = upper_bound(EstimatorKind::rank_trunc, rep.rank, p, rep.A_value);

  rep.sigma1 = class_sigma1(m);
  rep.sigma2 = class_sigma2(m);
  if (rep.sigma1 > 0.0) {
    const auto lb = lower_bound_variance_rate(rep.rank, p, rep.sigma1, rep.rows, rep.cols);
    rep.lb_variance_radius = lb.radius;
    rep.lb_variance_prob = lb.probability;
    rep.lb_variance_vacuous = lb.vacuous;
  } else {
    rep.lb_variance_vacuous = true;
  }
  if (rep.sigma2 > 0.0) {
    const auto lb = lower_bound_squared_rate(rep.rank, p, rep.sigma2, rep.rows, rep.cols);
    rep.lb_squared = lb.rate;
    rep.lb_squared_max_form = lb.max_form;
    rep.lb_squared_valid = lb.valid;
  }
  if (rep.lambda_max > 0.0) {
    rep.regime = matching_regime_check(rep.rows, rep.cols, rep.rank, p, rep.lambda_max);
  }
  return rep;
}

}  // namespace countrank
