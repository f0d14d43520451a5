#pragma once

// Data-parallel inner loops used by the norms, residuals, projections and
// variance sums. Each kernel has a scalar reference implementation and an
// AVX2+FMA variant; the variant is picked once at startup from CPUID and can
// be overridden with COUNTRANK_SIMD=scalar|avx2 or set_backend().
//
// Reductions in the AVX2 variant accumulate in four lanes, so results differ
// from the scalar path by rounding only. Runs are bit-reproducible for a fixed
// backend; pin COUNTRANK_SIMD=scalar for cross-machine byte equality.

#include <span>
#include <string_view>

namespace countrank::kernels {

enum class Backend { scalar, avx2 };

struct KernelTable {
  double (*sum_squares)(std::span<const double> x);
  double (*dot)(std::span<const double> x, std::span<const double> y);
  double (*squared_distance)(std::span<const double> x, std::span<const double> y);
  // out = a - s * b
  void (*scaled_difference)(std::span<const double> a, std::span<const double> b, double s,
                            std::span<double> out);
  void (*scale)(std::span<double> x, double s);
  void (*clamp_nonnegative)(std::span<double> x);
  // sum_k (a * x_k + b * x_k^2)
  double (*poly_sum)(std::span<const double> x, double a, double b);
  // acc_k += a * x_k + b * x_k^2
  void (*poly_accumulate)(std::span<const double> x, double a, double b, std::span<double> acc);
};

bool backend_supported(Backend b) noexcept;
std::string_view backend_name(Backend b) noexcept;

/// Kernel table for a specific backend. Throws std::invalid_argument if the CPU lacks it.
const KernelTable& table_for(Backend b);

Backend active_backend() noexcept;
void set_backend(Backend b);
const KernelTable& active() noexcept;

// Convenience wrappers over active().
inline double sum_squares(std::span<const double> x) { return active().sum_squares(x); }
inline double dot(std::span<const double> x, std::span<const double> y) { return active().dot(x, y); }
inline double squared_distance(std::span<const double> x, std::span<const double> y) {
  return active().squared_distance(x, y);
}
inline void scaled_difference(std::span<const double> a, std::span<const double> b, double s,
                              std::span<double> out) {
  active().scaled_difference(a, b, s, out);
}
inline void scale(std::span<double> x, double s) { active().scale(x, s); }
inline void clamp_nonnegative(std::span<double> x) { active().clamp_nonnegative(x); }
inline double poly_sum(std::span<const double> x, double a, double b) {
  return active().poly_sum(x, a, b);
}
inline void poly_accumulate(std::span<const double> x, double a, double b, std::span<double> acc) {
  active().poly_accumulate(x, a, b, acc);
}

}  // namespace countrank::kernels
