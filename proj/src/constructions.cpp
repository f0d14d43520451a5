#include "countrank/constructions.hpp"

#include <algorithm>
#include <cmath>

#include "countrank/bounds.hpp"
#include "countrank/error.hpp"
#include "countrank/linalg.hpp"

namespace countrank {

FamilyMode parse_family_mode(const std::string& name) {
  if (name == "fano") return FamilyMode::fano;
  if (name == "assouad") return FamilyMode::assouad;
  throw DataError("unknown family mode '" + name + "' (expected fano or assouad)");
}

std::string to_string(FamilyMode mode) { return mode == FamilyMode::fano ? "fano" : "assouad"; }

void BlockFamilyConfig::validate() const {
  if (r == 0 || k == 0 || l == 0) throw DataError("r, k and l must be positive");
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) throw DataError("lambda_max must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw DataError("p must lie in (0, 1]");
  const double ls = static_cast<double>(short_side());
  if (mode == FamilyMode::fano && lambda_max < 1.0 / (8.0 * ls * p)) {
    throw DataError("fano family needs lambda_max >= 1/(8 l p) = " + std::to_string(1.0 / (8.0 * ls * p)));
  }
  if (mode == FamilyMode::assouad && p < 1.0 / (2.0 * ls)) {
    throw DataError("assouad family needs p >= 1/(2 min(k, l)) = " + std::to_string(1.0 / (2.0 * ls)));
  }
}

namespace {

// Normalized layout: r*K rows, r*L columns, row i in group q = i / K carries its value
// on columns [q L, q L + width).
DenseMatrix build_blocks(const BitVector& theta, const BlockFamilyConfig& cfg, std::size_t width, double lambda0,
                         double lambda1) {
  const std::size_t kk = cfg.long_side();
  const std::size_t ll = cfg.short_side();
  if (theta.size() != cfg.code_length()) {
    throw DataError("theta has " + std::to_string(theta.size()) + " bits, expected " +
                    std::to_string(cfg.code_length()));
  }
  DenseMatrix out(cfg.r * kk, cfg.r * ll);
  for (std::size_t i = 0; i < cfg.r * kk; ++i) {
    const std::size_t q = i / kk;
    const double v = theta.get(i) ? lambda1 : lambda0;
    for (std::size_t j = q * ll; j < q * ll + width; ++j) out(i, j) = v;
  }
  return cfg.transposed() ? out.transposed() : out;
}

ClassCheck check_class(const DenseMatrix& m, std::size_t r, double lambda_max, double sigma, bool squared) {
  ClassCheck c;
  c.sigma = sigma;
  const auto e = m.entries();
  c.max_entry = *std::max_element(e.begin(), e.end());
  c.min_entry = *std::min_element(e.begin(), e.end());
  c.entries_ok = c.min_entry >= 0.0 && c.max_entry <= lambda_max * (1.0 + 1e-12);
  c.rank = numerical_rank(m);
  c.rank_ok = c.rank <= r;
  std::vector<double> col(m.cols(), 0.0);
  double max_row = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double v = squared ? m(i, j) * m(i, j) : m(i, j);
      s += v;
      col[j] += v;
    }
    max_row = std::max(max_row, s);
  }
  const double max_col = *std::max_element(col.begin(), col.end());
  c.sum_statistic = 0.5 * (std::sqrt(max_row) + std::sqrt(max_col));
  c.sums_ok = c.sum_statistic <= sigma * (1.0 + 1e-12);
  return c;
}

}  // namespace

DenseMatrix block_matrix(const BitVector& theta, const BlockFamilyConfig& cfg, double lambda0, double lambda1) {
  if (cfg.r == 0 || cfg.k == 0 || cfg.l == 0) throw DataError("r, k and l must be positive");
  return build_blocks(theta, cfg, cfg.short_side(), lambda0, lambda1);
}

ClassCheck check_variance_class(const DenseMatrix& m, std::size_t r, double lambda_max, double sigma1) {
  return check_class(m, r, lambda_max, sigma1, false);
}

ClassCheck check_squared_class(const DenseMatrix& m, std::size_t r, double lambda_max, double sigma2) {
  return check_class(m, r, lambda_max, sigma2, true);
}

DenseMatrix FanoFamily::member(std::size_t index) const {
  return block_matrix(packing.codewords.at(index), cfg, lambda0, lambda1);
}

FanoFamily fano_family(const BlockFamilyConfig& cfg, const FanoOptions& opts) {
  if (cfg.mode != FamilyMode::fano) throw DataError("fano_family needs mode fano");
  cfg.validate();
  FanoFamily f;
  f.cfg = cfg;
  const double ll = static_cast<double>(cfg.short_side());
  const std::size_t m = cfg.code_length();
  f.delta_prime = std::sqrt(cfg.lambda_max / (32.0 * ll * cfg.p));
  f.lambda0 = cfg.lambda_max / 2.0 - f.delta_prime;
  f.lambda1 = cfg.lambda_max / 2.0 + f.delta_prime;
  f.sigma1 = std::sqrt(static_cast<double>(cfg.long_side()) * cfg.lambda_max);
  f.kl_budget = static_cast<double>(m) * ll * cfg.p * 2.0 * f.delta_prime * f.delta_prime / cfg.lambda_max;
  f.separation = std::sqrt(static_cast<double>(m) * ll) * f.delta_prime;
  f.gv_target = gv_target(m);
  const std::size_t target = std::min(f.gv_target, opts.max_codewords);
  const std::size_t min_dist = (m + 3) / 4;
  try {
    f.packing = gv_packing(m, min_dist, target, opts.seed, opts.attempt_budget);
  } catch (const PackingBudgetExhausted& e) {
    if (m >= 32) throw;
    // Short packings are tolerated at small m; rebuild with the achieved count.
    f.packing = gv_packing(m, min_dist, e.achieved(), opts.seed, opts.attempt_budget);
  }
  f.target_met = f.packing.codewords.size() >= f.gv_target;
  if (!audit_packing(f.packing)) throw NumericalError("packing audit failed");
  return f;
}

DenseMatrix AssouadFamily::member(const BitVector& theta) const {
  return build_blocks(theta, cfg, effective_l, lambda0, lambda1);
}

AssouadFamily assouad_family(const BlockFamilyConfig& cfg) {
  if (cfg.mode != FamilyMode::assouad) throw DataError("assouad_family needs mode assouad");
  cfg.validate();
  AssouadFamily a;
  a.cfg = cfg;
  const auto half_inv = static_cast<std::size_t>(std::floor(1.0 / (2.0 * cfg.p)));
  a.effective_l = std::max<std::size_t>(1, std::min(cfg.short_side(), half_inv));
  a.lambda0 = 0.0;
  a.lambda1 = cfg.lambda_max;
  a.sigma2 = std::sqrt(static_cast<double>(cfg.long_side())) * cfg.lambda_max;
  const double le = static_cast<double>(a.effective_l);
  a.flip_frobenius_sq = le * cfg.lambda_max * cfg.lambda_max;
  a.per_bit_separation = a.flip_frobenius_sq / 4.0;
  a.missing_row_probability = std::pow(1.0 - cfg.p, le);
  return a;
}

}  // namespace countrank
