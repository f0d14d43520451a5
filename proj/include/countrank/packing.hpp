#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "countrank/error.hpp"

namespace countrank {

/// Fixed-length bit vector; bit k is theta_{k+1}.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t length) : length_(length), words_((length + 63) / 64, 0) {}

  std::size_t size() const noexcept { return length_; }
  bool get(std::size_t k) const { return (words_[k / 64] >> (k % 64)) & 1u; }
  void set(std::size_t k, bool v) {
    const std::uint64_t bit = std::uint64_t{1} << (k % 64);
    words_[k / 64] = v ? (words_[k / 64] | bit) : (words_[k / 64] & ~bit);
  }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::vector<std::uint64_t>& words() noexcept { return words_; }

  /// Hex digits, most significant bit first within each digit: digit d holds bits
  /// 4d+1..4d+4, theta_{4d+1} in its high bit. Length ceil(m/4); pad bits are zero.
  std::string to_hex() const;
  static BitVector from_hex(const std::string& hex, std::size_t length);

  bool operator==(const BitVector&) const = default;

 private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

std::size_t hamming_distance(const BitVector& a, const BitVector& b);

struct PackingSet {
  std::size_t length = 0;
  std::size_t min_distance = 0;
  std::uint64_t seed = 0;
  std::vector<BitVector> codewords;
};

/// Thrown when the attempt budget runs out before the target count.
class PackingBudgetExhausted : public NumericalError {
 public:
  PackingBudgetExhausted(std::size_t achieved, std::size_t target);
  std::size_t achieved() const noexcept { return achieved_; }

 private:
  std::size_t achieved_;
};

/// ceil(e^{m/8}), the cardinality promised by the Gilbert-Varshamov argument at distance m/4.
std::size_t gv_target(std::size_t length);

/// Randomized greedy packing: draw uniform words, keep those at distance >= min_distance from
/// every accepted word, stop at target_count. Requires 2 * min_distance <= length.
PackingSet gv_packing(std::size_t length, std::size_t min_distance, std::size_t target_count,
                      std::uint64_t seed, std::uint64_t attempt_budget = 10'000'000);

/// Exhaustive O(|codewords|^2 m) audit; returns the smallest pairwise distance
/// (length + 1 for fewer than two codewords).
std::size_t minimum_pairwise_distance(const PackingSet& set);
bool audit_packing(const PackingSet& set);

}  // namespace countrank
