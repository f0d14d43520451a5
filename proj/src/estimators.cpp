#include "countrank/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "countrank/error.hpp"
#include "countrank/linalg.hpp"

namespace countrank {
namespace {

void check_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DataError("sampling probability p must lie in (0, 1]");
}

void check_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DataError(std::string(name) + " must be finite and >= 0");
}

struct Shrunk {
  DenseMatrix matrix;
  std::vector<double> singular_values;  // of `matrix`, nonincreasing
};

// Rebuilds from the leading triplets with singular values `kept`.
Shrunk rebuild(const SvdFactorization& f, std::vector<double> kept) {
  const std::size_t m = f.left.rows();
  const std::size_t n = f.right.rows();
  const auto k = static_cast<Eigen::Index>(kept.size());
  if (k == 0) return {DenseMatrix(m, n), {}};
  const Eigen::Map<const Eigen::VectorXd> s(kept.data(), k);
  RowMajorMatrix out = f.left.view().leftCols(k) * s.asDiagonal() * f.right.view().leftCols(k).transpose();
  return {DenseMatrix(out), std::move(kept)};
}

Shrunk soft_threshold(const DenseMatrix& a, double tau) {
  const auto f = svd(a);
  std::vector<double> kept;
  for (double s : f.singular_values) {
    if (s > tau) kept.push_back(s - tau);
  }
  return rebuild(f, std::move(kept));
}

Shrunk hard_truncate(const DenseMatrix& a, std::size_t r) {
  const auto f = svd(a);
  const std::size_t k = std::min(r, f.singular_values.size());
  std::vector<double> kept(f.singular_values.begin(), f.singular_values.begin() + static_cast<std::ptrdiff_t>(k));
  while (!kept.empty() && kept.back() <= 0.0) kept.pop_back();
  return rebuild(f, std::move(kept));
}

// Fills estimate, output rank and projection; `residual` maps an estimate to its constraint residual.
template <typename Residual>
EstimateResult finish(Shrunk shrunk, double threshold, Projection project, Residual residual) {
  EstimateResult result;
  result.threshold_used = threshold;
  result.residual_opnorm_unprojected = residual(shrunk.matrix);
  if (project == Projection::none) {
    result.output_rank = numerical_rank(shrunk.singular_values);
    result.estimate = std::move(shrunk.matrix);
    result.residual_opnorm = result.residual_opnorm_unprojected;
  } else {
    result.estimate = apply_projections(std::move(shrunk.matrix), project);
    result.output_rank = numerical_rank(result.estimate);
    result.residual_opnorm = residual(result.estimate);
    result.projected = project;
  }
  return result;
}

auto poisson_residual(const DenseMatrix& y, double p) {
  return [&y, p](const DenseMatrix& est) { return operator_norm(scaled_difference(y, est, p)); };
}

std::vector<double> inverse_sqrt_counts(std::span<const std::int64_t> counts) {
  std::vector<double> out;
  out.reserve(counts.size());
  for (auto n : counts) out.push_back(1.0 / std::sqrt(static_cast<double>(n)));
  return out;
}

}  // namespace

EstimatorKind parse_estimator_kind(const std::string& name) {
  if (name == "dantzig") return EstimatorKind::dantzig;
  if (name == "regls") return EstimatorKind::regls;
  if (name == "rank_trunc") return EstimatorKind::rank_trunc;
  if (name == "multinomial_matrix") return EstimatorKind::multinomial_matrix;
  if (name == "multinomial_rows") return EstimatorKind::multinomial_rows;
  throw DataError("unknown estimator kind '" + name + "'");
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::dantzig: return "dantzig";
    case EstimatorKind::regls: return "regls";
    case EstimatorKind::rank_trunc: return "rank_trunc";
    case EstimatorKind::multinomial_matrix: return "multinomial_matrix";
    case EstimatorKind::multinomial_rows: return "multinomial_rows";
  }
  return "unknown";
}

void EstimatorParams::validate() const {
  check_p(p);
  switch (kind) {
    case EstimatorKind::dantzig:
    case EstimatorKind::multinomial_matrix:
    case EstimatorKind::multinomial_rows:
      if (!delta) throw DataError(to_string(kind) + " requires delta");
      check_nonnegative(*delta, "delta");
      break;
    case EstimatorKind::regls:
      if (!lambda) throw DataError("regls requires lambda");
      check_nonnegative(*lambda, "lambda");
      break;
    case EstimatorKind::rank_trunc:
      if (!rank || *rank == 0) throw DataError("rank_trunc requires rank >= 1");
      break;
  }
  if (has(project, Projection::global_simplex) && has(project, Projection::row_simplex)) {
    throw DataError("global_simplex and row_simplex projections are mutually exclusive");
  }
}

DenseMatrix svt(const DenseMatrix& a, double tau) {
  check_nonnegative(tau, "tau");
  return soft_threshold(a, tau).matrix;
}

DenseMatrix truncate_rank(const DenseMatrix& a, std::size_t r) {
  if (r == 0) throw DataError("rank must be >= 1");
  return hard_truncate(a, r).matrix;
}

EstimateResult estimate_dantzig(const MaskedObservations& obs, double p, double delta,
                                Projection project) {
  check_p(p);
  check_nonnegative(delta, "delta");
  const DenseMatrix y = mask_adjoint(obs);
  Shrunk s = soft_threshold(y, delta);
  s.matrix = scaled(std::move(s.matrix), 1.0 / p);
  for (double& v : s.singular_values) v /= p;
  return finish(std::move(s), delta, project, poisson_residual(y, p));
}

EstimateResult estimate_regls(const MaskedObservations& obs, double p, double lambda,
                              Projection project) {
  check_p(p);
  check_nonnegative(lambda, "lambda");
  const DenseMatrix y = mask_adjoint(obs);
  const double tau = lambda / (2.0 * p * p);
  return finish(soft_threshold(scaled(y, 1.0 / p), tau), tau, project, poisson_residual(y, p));
}

EstimateResult estimate_rank_truncated(const MaskedObservations& obs, double p, std::size_t r,
                                       Projection project) {
  check_p(p);
  if (r == 0) throw DataError("rank must be >= 1");
  const DenseMatrix y = mask_adjoint(obs);
  Shrunk s = hard_truncate(scaled(y, 1.0 / p), r);
  const double threshold = s.singular_values.empty() ? 0.0 : s.singular_values.back();
  return finish(std::move(s), threshold, project, poisson_residual(y, p));
}

EstimateResult estimate_multinomial_matrix(const DenseMatrix& counts, std::int64_t trials,
                                           double delta, Projection project) {
  check_nonnegative(delta, "delta");
  if (trials < 1) throw DataError("N must be >= 1");
  if (!is_count_matrix(counts)) throw DataError("counts must be nonnegative integers");
  double total = 0.0;
  for (double v : counts.entries()) total += v;
  if (total != static_cast<double>(trials)) {
    throw DataError("counts sum to " + std::to_string(static_cast<long long>(total)) + " but N = " +
                    std::to_string(trials));
  }
  const double n = static_cast<double>(trials);
  Shrunk s = soft_threshold(counts, n * delta);
  s.matrix = scaled(std::move(s.matrix), 1.0 / n);
  for (double& v : s.singular_values) v /= n;
  return finish(std::move(s), n * delta, project, [&counts, n](const DenseMatrix& est) {
    return operator_norm(scaled_difference(counts, est, n));
  });
}

EstimateResult estimate_row_multinomial(const DenseMatrix& counts,
                                        std::span<const std::int64_t> trial_counts, double delta,
                                        Projection project) {
  check_nonnegative(delta, "delta");
  if (trial_counts.size() != counts.rows()) throw DataError("one trial count per row required");
  if (!is_count_matrix(counts)) throw DataError("counts must be nonnegative integers");
  for (std::size_t i = 0; i < counts.rows(); ++i) {
    if (trial_counts[i] < 1) throw DataError("trial counts must be >= 1");
    double sum = 0.0;
    for (double v : counts.row(i)) sum += v;
    if (sum != static_cast<double>(trial_counts[i])) {
      throw DataError("row " + std::to_string(i + 1) + " sums to " +
                      std::to_string(static_cast<long long>(sum)) + " but N_i = " +
                      std::to_string(trial_counts[i]));
    }
  }
  const auto inv_sqrt = inverse_sqrt_counts(trial_counts);
  const DenseMatrix whitened = scale_rows(counts, inv_sqrt);  // D^{-1/2} X
  Shrunk s = soft_threshold(whitened, delta);
  s.matrix = scale_rows(std::move(s.matrix), inv_sqrt);  // D^{-1/2} W
  // Singular values of D^{-1/2} W are not those of W; recount on the matrix itself.
  s.singular_values = singular_values(s.matrix);
  std::vector<double> sqrt_counts;
  for (auto n : trial_counts) sqrt_counts.push_back(std::sqrt(static_cast<double>(n)));
  return finish(std::move(s), delta, project, [&](const DenseMatrix& est) {
    // D^{-1/2}(X - D est) = D^{-1/2} X - D^{1/2} est
    return operator_norm(scaled_difference(whitened, scale_rows(est, sqrt_counts), 1.0));
  });
}

EstimateResult estimate(const EstimatorParams& params, const MaskedObservations& obs) {
  params.validate();
  switch (params.kind) {
    case EstimatorKind::dantzig:
      return estimate_dantzig(obs, params.p, *params.delta, params.project);
    case EstimatorKind::regls:
      return estimate_regls(obs, params.p, *params.lambda, params.project);
    case EstimatorKind::rank_trunc:
      return estimate_rank_truncated(obs, params.p, *params.rank, params.project);
    default:
      throw DataError(to_string(params.kind) + " needs a dense count matrix, not masked observations");
  }
}

}  // namespace countrank
