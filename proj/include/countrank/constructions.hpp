#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "countrank/dense_matrix.hpp"
#include "countrank/packing.hpp"

namespace countrank {

enum class FamilyMode { fano, assouad };

FamilyMode parse_family_mode(const std::string& name);
std::string to_string(FamilyMode mode);

/// Block families on m = r*k rows and n = r*l columns.
struct BlockFamilyConfig {
  std::size_t r = 1;
  std::size_t k = 1;
  std::size_t l = 1;
  double lambda_max = 1.0;
  double p = 1.0;
  FamilyMode mode = FamilyMode::fano;

  std::size_t rows() const noexcept { return r * k; }
  std::size_t cols() const noexcept { return r * l; }
  /// Row-block length after the k >= l normalization: max(k, l).
  std::size_t long_side() const noexcept { return k >= l ? k : l; }
  std::size_t short_side() const noexcept { return k >= l ? l : k; }
  /// Families are built with k >= l; when k < l they are built on the transpose.
  bool transposed() const noexcept { return k < l; }
  /// Number of bits indexing a member, r * max(k, l).
  std::size_t code_length() const noexcept { return r * long_side(); }

  /// Throws DataError on bad sizes, or when the mode's regime condition fails.
  void validate() const;
};

/// (M_theta)_{ij} = lambda_{theta_i} on the block of row i, zero elsewhere. theta has
/// code_length() bits and indexes rows of the normalized (k >= l) layout.
DenseMatrix block_matrix(const BitVector& theta, const BlockFamilyConfig& cfg, double lambda0, double lambda1);

struct ClassCheck {
  std::size_t rank = 0;
  double max_entry = 0.0;
  double min_entry = 0.0;
  /// (sqrt(max row sum) + sqrt(max col sum)) / 2 of M, or of M squared entrywise.
  double sum_statistic = 0.0;
  double sigma = 0.0;
  bool rank_ok = false;
  bool entries_ok = false;
  bool sums_ok = false;

  bool ok() const noexcept { return rank_ok && entries_ok && sums_ok; }
};

/// Membership in {M in [0, lambda_max]^{m x n}: rank <= r, sqrt(max row sum) + sqrt(max col sum) <= 2 sigma1}.
ClassCheck check_variance_class(const DenseMatrix& m, std::size_t r, double lambda_max, double sigma1);
/// Same with squared entries in the sums and sigma2.
ClassCheck check_squared_class(const DenseMatrix& m, std::size_t r, double lambda_max, double sigma2);

struct FanoOptions {
  std::uint64_t seed = 0;
  /// Cap on the packing size; the target is min(ceil(e^{m/8}), max_codewords).
  std::size_t max_codewords = 4096;
  std::uint64_t attempt_budget = 10'000'000;
};

struct FanoFamily {
  BlockFamilyConfig cfg;
  double delta_prime = 0.0;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double sigma1 = 0.0;
  /// Upper bound on KL(P_theta || Q), equal to m/16.
  double kl_budget = 0.0;
  /// Guaranteed ||M_theta - M_theta'||_F for distinct members, sqrt(m l) delta'.
  double separation = 0.0;
  std::size_t gv_target = 0;
  /// True when the packing reached ceil(e^{m/8}) codewords.
  bool target_met = false;
  PackingSet packing;

  std::size_t size() const noexcept { return packing.codewords.size(); }
  DenseMatrix member(std::size_t index) const;
};

/// Packing-indexed family with lambda0/1 = lambda_max/2 -+ delta', delta' = sqrt(lambda_max / (32 l p)).
/// For m < 32 a short packing is reported through target_met instead of failing;
/// otherwise PackingBudgetExhausted propagates.
FanoFamily fano_family(const BlockFamilyConfig& cfg, const FanoOptions& opts);

struct AssouadFamily {
  BlockFamilyConfig cfg;
  /// Block width actually used: max(1, min(short side, floor(1/2p))). Remaining columns stay zero.
  std::size_t effective_l = 0;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double sigma2 = 0.0;
  /// Assouad per-coordinate separation l lambda_max^2 / 4.
  double per_bit_separation = 0.0;
  /// ||M_theta - M_theta^i||_F^2 = l lambda_max^2.
  double flip_frobenius_sq = 0.0;
  /// (1-p)^l, probability that a row block is entirely unobserved.
  double missing_row_probability = 0.0;

  std::size_t code_length() const noexcept { return cfg.code_length(); }
  DenseMatrix member(const BitVector& theta) const;
};

AssouadFamily assouad_family(const BlockFamilyConfig& cfg);

}  // namespace countrank
