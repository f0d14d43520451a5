#include <cstddef>

#include "kernels/kernels_internal.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define COUNTRANK_AVX2_TARGET __attribute__((target("avx2,fma")))

namespace countrank::kernels::detail {
namespace {

COUNTRANK_AVX2_TARGET inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

COUNTRANK_AVX2_TARGET double sum_squares(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a = _mm256_loadu_pd(p + i);
    const __m256d b = _mm256_loadu_pd(p + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(p + i);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += p[i] * p[i];
  return acc;
}

COUNTRANK_AVX2_TARGET double dot(std::span<const double> x, std::span<const double> y) {
  const double* p = x.data();
  const double* q = y.data();
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(p + i), _mm256_loadu_pd(q + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(p + i + 4), _mm256_loadu_pd(q + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(p + i), _mm256_loadu_pd(q + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += p[i] * q[i];
  return acc;
}

COUNTRANK_AVX2_TARGET double squared_distance(std::span<const double> x,
                                              std::span<const double> y) {
  const double* p = x.data();
  const double* q = y.data();
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), _mm256_loadu_pd(q + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = p[i] - q[i];
    s += d * d;
  }
  return s;
}

COUNTRANK_AVX2_TARGET void scaled_difference(std::span<const double> a, std::span<const double> b,
                                             double s, std::span<double> out) {
  const std::size_t n = a.size();
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // fnmadd: -(s * b) + a
    const __m256d r = _mm256_fnmadd_pd(vs, _mm256_loadu_pd(b.data() + i), _mm256_loadu_pd(a.data() + i));
    _mm256_storeu_pd(out.data() + i, r);
  }
  for (; i < n; ++i) out[i] = a[i] - s * b[i];
}

COUNTRANK_AVX2_TARGET void scale(std::span<double> x, double s) {
  const std::size_t n = x.size();
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x.data() + i, _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), vs));
  }
  for (; i < n; ++i) x[i] *= s;
}

COUNTRANK_AVX2_TARGET void clamp_nonnegative(std::span<double> x) {
  const std::size_t n = x.size();
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x.data() + i, _mm256_max_pd(_mm256_loadu_pd(x.data() + i), zero));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

COUNTRANK_AVX2_TARGET double poly_sum(std::span<const double> x, double a, double b) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x.data() + i);
    // a*v + b*v*v = v * (a + b*v)
    acc = _mm256_fmadd_pd(v, _mm256_fmadd_pd(vb, v, va), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a * x[i] + b * x[i] * x[i];
  return s;
}

COUNTRANK_AVX2_TARGET void poly_accumulate(std::span<const double> x, double a, double b,
                                           std::span<double> acc) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x.data() + i);
    const __m256d r = _mm256_fmadd_pd(v, _mm256_fmadd_pd(vb, v, va), _mm256_loadu_pd(acc.data() + i));
    _mm256_storeu_pd(acc.data() + i, r);
  }
  for (; i < n; ++i) acc[i] += a * x[i] + b * x[i] * x[i];
}

}  // namespace

const KernelTable avx2_table{
    &sum_squares,       &dot,   &squared_distance,  &scaled_difference,
    &scale,             &clamp_nonnegative,         &poly_sum,
    &poly_accumulate,
};
const bool has_avx2_table = true;

}  // namespace countrank::kernels::detail

#else

namespace countrank::kernels::detail {
const KernelTable avx2_table = scalar_table;
const bool has_avx2_table = false;
}  // namespace countrank::kernels::detail

#endif
