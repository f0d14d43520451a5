#pragma once

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw 2011, as
// shipped in Random123). This is the pinned generator behind every seeded
// draw in the library; changing it changes every reproducibility fixture.
//
// Layout: key = (seed low word, seed high word); counter = (block low, block
// high, stream low, stream high). A stream is the pair (seed, stream id) and
// yields 4 words per block. Stream ids encode (purpose tag, row, col) so that
// per-cell draws do not depend on generation order.

#include <array>
#include <cstdint>

namespace countrank::rng {

inline constexpr const char* kGeneratorName = "philox4x32-10/v1";

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

enum class StreamTag : std::uint8_t {
  bernoulli_mask = 1,
  poisson = 2,
  matrix_multinomial = 3,
  row_multinomial = 4,
  packing = 5,
  truth = 6,
  trial_seed = 7,
  instance = 8,
};

/// Row and column must be below 2^28.
std::uint64_t stream_id(StreamTag tag, std::uint32_t row = 0, std::uint32_t col = 0) noexcept;

/// Seed for sub-experiment `index` of a run seeded with `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id) noexcept;
  Stream(std::uint64_t seed, StreamTag tag, std::uint32_t row = 0, std::uint32_t col = 0) noexcept
      : Stream(seed, stream_id(tag, row, col)) {}

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform() noexcept;
  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned pos_ = 4;
};

}  // namespace countrank::rng
