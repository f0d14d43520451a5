#pragma once

// SVD closed forms of the low-rank estimators for Poisson and multinomial
// count data. The nonnegativity constraint is not imposed inside the solve;
// callers ask for it (or a simplex constraint) as a post-projection, which
// can only move the estimate closer to any feasible truth.
//
// With Y = A_Omega^*(X):
//   dantzig     argmin ||W||_*  s.t. ||Y - pW|| <= delta      = svt(Y, delta) / p
//   regls       argmin ||Y - pW||_F^2 + lambda ||W||_*        = svt(Y / p, lambda / (2 p^2))
//   rank_trunc  argmin ||Y - pW||_F  s.t. rank(W) <= r        = best rank-r approximation of Y / p
// The first two coincide when lambda = 2 p delta.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "countrank/dense_matrix.hpp"
#include "countrank/projections.hpp"

namespace countrank {

enum class EstimatorKind { dantzig, regls, rank_trunc, multinomial_matrix, multinomial_rows };

EstimatorKind parse_estimator_kind(const std::string& name);
std::string to_string(EstimatorKind kind);

struct EstimatorParams {
  EstimatorKind kind = EstimatorKind::dantzig;
  std::optional<double> delta;
  std::optional<double> lambda;
  std::optional<std::size_t> rank;
  double p = 1.0;
  Projection project = Projection::none;

  /// Checks that the parameter required by `kind` is present and in range.
  void validate() const;
};

struct EstimateResult {
  DenseMatrix estimate;
  /// Singular-value threshold applied by the closed form (delta, lambda/(2p^2), N*delta,
  /// or the r-th singular value kept for rank truncation).
  double threshold_used = 0.0;
  /// Singular values above 1e-10 * sigma_max of the returned estimate.
  std::size_t output_rank = 0;
  /// Constraint residual of the returned estimate: ||A_Omega^*(X) - p*est|| (Poisson kinds),
  /// ||X - N*est|| (matrix multinomial) or ||D^{-1/2}(X - D*est)|| (row multinomial).
  double residual_opnorm = 0.0;
  /// Same residual before any projection.
  double residual_opnorm_unprojected = 0.0;
  Projection projected = Projection::none;
};

/// U * diag(max(sigma - tau, 0)) * V^T. Throws DataError for tau < 0.
DenseMatrix svt(const DenseMatrix& a, double tau);
/// Keeps the r leading singular triplets (SVD output order on ties).
DenseMatrix truncate_rank(const DenseMatrix& a, std::size_t r);

EstimateResult estimate_dantzig(const MaskedObservations& obs, double p, double delta,
                                Projection project = Projection::none);
EstimateResult estimate_regls(const MaskedObservations& obs, double p, double lambda,
                              Projection project = Projection::none);
EstimateResult estimate_rank_truncated(const MaskedObservations& obs, double p, std::size_t r,
                                       Projection project = Projection::none);

/// X ~ Multinomial(P, N); sum(X) must equal N.
EstimateResult estimate_multinomial_matrix(const DenseMatrix& counts, std::int64_t trials,
                                           double delta, Projection project = Projection::none);
/// Row i of X ~ Multinomial(p_i, N_i); row sums must equal trial_counts.
EstimateResult estimate_row_multinomial(const DenseMatrix& counts,
                                        std::span<const std::int64_t> trial_counts, double delta,
                                        Projection project = Projection::none);

/// Dispatch on params.kind for Poisson observations (dantzig, regls, rank_trunc).
EstimateResult estimate(const EstimatorParams& params, const MaskedObservations& obs);

}  // namespace countrank
