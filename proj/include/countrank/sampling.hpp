#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "countrank/dense_matrix.hpp"
#include "countrank/philox.hpp"

namespace countrank {

struct SamplingConfig {
  double p = 1.0;  ///< Bernoulli inclusion probability, in (0, 1]
  std::uint64_t seed = 0;

  void validate() const;
};

/// Rows of P on the probability simplex (within 1e-9) and N_i >= 1 trials per row.
struct RowMultinomialModel {
  DenseMatrix probabilities;
  std::vector<std::int64_t> trial_counts;

  void validate() const;
};

/// Per-cell Bernoulli(p) inclusion; cell (i, j) uses its own stream.
Mask sample_bernoulli_mask(std::size_t rows, std::size_t cols, const SamplingConfig& cfg);

/// Independent Poisson(M_ij) draws at the mask cells. Throws DataError on a
/// negative rate or a dimension mismatch.
MaskedObservations sample_poisson(const DenseMatrix& rates, const Mask& mask, std::uint64_t seed);

/// X ~ Multinomial(P, N) over all cells; sum(P) must be 1 within 1e-9.
DenseMatrix sample_matrix_multinomial(const DenseMatrix& probabilities, std::int64_t trials,
                                      std::uint64_t seed);

/// Row i ~ Multinomial(p_i, N_i), rows independent.
DenseMatrix sample_row_multinomial(const RowMultinomialModel& model, std::uint64_t seed);

namespace distributions {

/// Inversion for lambda < 10, PTRS transformed rejection otherwise.
std::int64_t poisson(rng::Stream& stream, double lambda);
/// Geometric waiting-time inversion for n*min(p,1-p) < 10, BTRS otherwise.
std::int64_t binomial(rng::Stream& stream, std::int64_t n, double p);
/// Conditional-binomial multinomial draw; probabilities must sum to 1 (not rechecked).
void multinomial(rng::Stream& stream, std::int64_t n, std::span<const double> probabilities,
                 std::span<double> out);

}  // namespace distributions

}  // namespace countrank
