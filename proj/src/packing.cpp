#include "countrank/packing.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <string>

#include "countrank/philox.hpp"

namespace countrank {

std::string BitVector::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve((length_ + 3) / 4);
  for (std::size_t d = 0; d * 4 < length_; ++d) {
    unsigned v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t k = 4 * d + b;
      v = (v << 1) | (k < length_ && get(k) ? 1u : 0u);
    }
    out.push_back(digits[v]);
  }
  return out;
}

BitVector BitVector::from_hex(const std::string& hex, std::size_t length) {
  if (hex.size() != (length + 3) / 4) {
    throw DataError("hex codeword '" + hex + "' has wrong length for m = " + std::to_string(length));
  }
  BitVector out(length);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[d])));
    unsigned v;
    if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
    else throw DataError("invalid hex digit in codeword '" + hex + "'");
    for (std::size_t b = 0; b < 4; ++b) {
      const bool bit = (v >> (3 - b)) & 1u;
      const std::size_t k = 4 * d + b;
      if (k < length) out.set(k, bit);
      else if (bit) throw DataError("nonzero pad bit in codeword '" + hex + "'");
    }
  }
  return out;
}

std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw DataError("hamming_distance: length mismatch");
  std::size_t d = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w) {
    d += static_cast<std::size_t>(std::popcount(a.words()[w] ^ b.words()[w]));
  }
  return d;
}

PackingBudgetExhausted::PackingBudgetExhausted(std::size_t achieved, std::size_t target)
    : NumericalError("packing attempt budget exhausted with " + std::to_string(achieved) + " of " +
                     std::to_string(target) + " codewords"),
      achieved_(achieved) {}

std::size_t gv_target(std::size_t length) {
  return static_cast<std::size_t>(std::ceil(std::exp(static_cast<double>(length) / 8.0)));
}

PackingSet gv_packing(std::size_t length, std::size_t min_distance, std::size_t target_count,
                      std::uint64_t seed, std::uint64_t attempt_budget) {
  if (length == 0) throw DataError("codeword length must be positive");
  if (2 * min_distance > length) throw DataError("min_dist must be at most m/2");
  PackingSet set{length, min_distance, seed, {}};
  set.codewords.reserve(target_count);
  rng::Stream stream(seed, rng::StreamTag::packing);
  const std::size_t tail_bits = length % 64;
  const std::uint64_t tail_mask = tail_bits == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << tail_bits) - 1;

  BitVector candidate(length);
  for (std::uint64_t attempt = 0; attempt < attempt_budget && set.codewords.size() < target_count;
       ++attempt) {
    auto& words = candidate.words();
    for (auto& w : words) w = stream.next_u64();
    words.back() &= tail_mask;
    const bool far = std::all_of(set.codewords.begin(), set.codewords.end(), [&](const BitVector& c) {
      return hamming_distance(c, candidate) >= min_distance;
    });
    if (far) set.codewords.push_back(candidate);
  }
  if (set.codewords.size() < target_count) {
    throw PackingBudgetExhausted(set.codewords.size(), target_count);
  }
  return set;
}

std::size_t minimum_pairwise_distance(const PackingSet& set) {
  std::size_t best = set.length + 1;
  for (std::size_t a = 0; a < set.codewords.size(); ++a)
    for (std::size_t b = a + 1; b < set.codewords.size(); ++b)
      best = std::min(best, hamming_distance(set.codewords[a], set.codewords[b]));
  return best;
}

bool audit_packing(const PackingSet& set) {
  for (const auto& c : set.codewords) {
    if (c.size() != set.length) return false;
  }
  return minimum_pairwise_distance(set) >= set.min_distance;
}

}  // namespace countrank
