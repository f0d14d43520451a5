#include "countrank/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "countrank/error.hpp"

namespace countrank {

void SamplingConfig::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw DataError("sampling probability p must lie in (0, 1]");
}

void RowMultinomialModel::validate() const {
  if (trial_counts.size() != probabilities.rows()) {
    throw DataError("row multinomial: one trial count per row required");
  }
  for (std::size_t i = 0; i < probabilities.rows(); ++i) {
    if (trial_counts[i] < 1) throw DataError("row multinomial: trial counts must be >= 1");
    double sum = 0.0;
    for (double v : probabilities.row(i)) {
      if (v < 0.0 || v > 1.0) throw DataError("row multinomial: probabilities must lie in [0, 1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw DataError("row multinomial: row " + std::to_string(i + 1) + " sums to " +
                      std::to_string(sum) + ", not 1");
    }
  }
}

namespace distributions {
namespace {

std::int64_t poisson_inversion(rng::Stream& s, double lambda) {
  const double u = s.uniform();
  double pmf = std::exp(-lambda);
  double cdf = pmf;
  std::int64_t k = 0;
  while (u > cdf) {
    ++k;
    pmf *= lambda / static_cast<double>(k);
    cdf += pmf;
    // cdf has stalled below u from rounding; the remaining mass is < 1e-16.
    if (pmf == 0.0 || k > 1000) break;
  }
  return k;
}

// Hormann (1993), "The transformed rejection method for generating Poisson
// random variables", algorithm PTRS.
std::int64_t poisson_ptrs(rng::Stream& s, double lambda) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = s.uniform() - 0.5;
    const double v = s.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -lambda + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

std::int64_t binomial_inversion(rng::Stream& s, std::int64_t n, double p) {
  // Count geometric waiting times until they overrun n.
  const double log_q = std::log1p(-p);
  double total = 0.0;
  std::int64_t successes = 0;
  while (true) {
    total += std::ceil(std::log(s.uniform()) / log_q);
    if (total > static_cast<double>(n)) return successes;
    ++successes;
  }
}

double stirling_tail(double k) {
  static constexpr double table[] = {
      0.0810614667953272,  0.0413406959554092,  0.0276779256849983,  0.02079067210376509,
      0.0166446911898211,  0.0138761288230707,  0.0118967099458917,  0.0104112652619720,
      0.00925546218271273, 0.00833056343336287,
  };
  if (k <= 9.0) return table[static_cast<int>(k)];
  const double kp1sq = (k + 1.0) * (k + 1.0);
  return (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / 1260.0 / kp1sq) / kp1sq) / (k + 1.0);
}

// Hormann (1993), "The generation of binomial random variates", algorithm
// BTRS. Requires p <= 1/2 and n*p >= 10.
std::int64_t binomial_btrs(rng::Stream& s, std::int64_t n_int, double p) {
  const double n = static_cast<double>(n_int);
  const double stddev = std::sqrt(n * p * (1.0 - p));
  const double b = 1.15 + 2.53 * stddev;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = n * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double r = p / (1.0 - p);
  const double alpha = (2.83 + 5.1 / b) * stddev;
  const double m = std::floor((n + 1.0) * p);
  while (true) {
    const double u = s.uniform() - 0.5;
    double v = s.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + c);
    if (k < 0.0 || k > n) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
    v = std::log(v * alpha / (a / (us * us) + b));
    const double upper = (m + 0.5) * std::log((m + 1.0) / (r * (n - m + 1.0))) +
                         (n + 1.0) * std::log((n - m + 1.0) / (n - k + 1.0)) +
                         (k + 0.5) * std::log(r * (n - k + 1.0) / (k + 1.0)) + stirling_tail(m) +
                         stirling_tail(n - m) - stirling_tail(k) - stirling_tail(n - k);
    if (v <= upper) return static_cast<std::int64_t>(k);
  }
}

}  // namespace

std::int64_t poisson(rng::Stream& stream, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DataError("Poisson rate must be finite and >= 0");
  if (lambda == 0.0) return 0;
  return lambda < 10.0 ? poisson_inversion(stream, lambda) : poisson_ptrs(stream, lambda);
}

std::int64_t binomial(rng::Stream& stream, std::int64_t n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  if (p > 0.5) return n - binomial(stream, n, 1.0 - p);
  if (static_cast<double>(n) * p < 10.0) return binomial_inversion(stream, n, p);
  return binomial_btrs(stream, n, p);
}

void multinomial(rng::Stream& stream, std::int64_t n, std::span<const double> probabilities,
                 std::span<double> out) {
  // Suffix masses avoid the drift of 1 - running sum.
  std::vector<double> suffix(probabilities.size() + 1, 0.0);
  for (std::size_t k = probabilities.size(); k-- > 0;) suffix[k] = suffix[k + 1] + probabilities[k];
  std::int64_t remaining = n;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (remaining == 0 || probabilities[k] <= 0.0) {
      out[k] = 0.0;
      continue;
    }
    const double q = suffix[k + 1] <= 0.0 ? 1.0 : std::min(1.0, probabilities[k] / suffix[k]);
    const std::int64_t draw = binomial(stream, remaining, q);
    out[k] = static_cast<double>(draw);
    remaining -= draw;
  }
  // Only reachable when every positive-probability cell was skipped by rounding.
  if (remaining > 0) {
    for (std::size_t k = probabilities.size(); k-- > 0;) {
      if (probabilities[k] > 0.0) {
        out[k] += static_cast<double>(remaining);
        break;
      }
    }
  }
}

}  // namespace distributions

Mask sample_bernoulli_mask(std::size_t rows, std::size_t cols, const SamplingConfig& cfg) {
  cfg.validate();
  if (rows == 0 || cols == 0) throw DataError("mask dimensions must be positive");
  if (cfg.p == 1.0) return Mask::full(rows, cols);
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(static_cast<double>(rows * cols) * cfg.p * 1.1) + 16);
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      rng::Stream s(cfg.seed, rng::StreamTag::bernoulli_mask, i, j);
      if (s.uniform() < cfg.p) cells.push_back({i, j});
    }
  }
  return Mask(rows, cols, std::move(cells));
}

MaskedObservations sample_poisson(const DenseMatrix& rates, const Mask& mask, std::uint64_t seed) {
  if (rates.rows() != mask.rows() || rates.cols() != mask.cols()) {
    throw DataError("sample_poisson: rate matrix and mask dimensions differ");
  }
  for (double v : rates.entries()) {
    if (v < 0.0) throw DataError("sample_poisson: negative rate");
  }
  std::vector<std::int64_t> counts;
  counts.reserve(mask.size());
  for (const Cell c : mask.cells()) {
    rng::Stream s(seed, rng::StreamTag::poisson, c.row, c.col);
    counts.push_back(distributions::poisson(s, rates(c.row, c.col)));
  }
  return MaskedObservations(mask, std::move(counts));
}

DenseMatrix sample_matrix_multinomial(const DenseMatrix& probabilities, std::int64_t trials,
                                      std::uint64_t seed) {
  if (trials < 1) throw DataError("matrix multinomial: N must be >= 1");
  double sum = 0.0;
  for (double v : probabilities.entries()) {
    if (v < 0.0) throw DataError("matrix multinomial: probabilities must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DataError("matrix multinomial: probabilities sum to " + std::to_string(sum) + ", not 1");
  }
  DenseMatrix counts(probabilities.rows(), probabilities.cols());
  rng::Stream s(seed, rng::StreamTag::matrix_multinomial);
  distributions::multinomial(s, trials, probabilities.entries(), counts.entries());
  return counts;
}

DenseMatrix sample_row_multinomial(const RowMultinomialModel& model, std::uint64_t seed) {
  model.validate();
  const auto& P = model.probabilities;
  DenseMatrix counts(P.rows(), P.cols());
  for (std::uint32_t i = 0; i < P.rows(); ++i) {
    rng::Stream s(seed, rng::StreamTag::row_multinomial, i);
    distributions::multinomial(s, model.trial_counts[i], P.row(i), counts.row(i));
  }
  return counts;
}

}  // namespace countrank
