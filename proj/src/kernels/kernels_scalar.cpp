#include <cstddef>

#include "kernels/kernels_internal.hpp"

namespace countrank::kernels::detail {
namespace {

double sum_squares(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

void scaled_difference(std::span<const double> a, std::span<const double> b, double s,
                       std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - s * b[i];
}

void scale(std::span<double> x, double s) {
  for (double& v : x) v *= s;
}

void clamp_nonnegative(std::span<double> x) {
  for (double& v : x) v = v > 0.0 ? v : 0.0;
}

double poly_sum(std::span<const double> x, double a, double b) {
  double acc = 0.0;
  for (double v : x) acc += a * v + b * v * v;
  return acc;
}

void poly_accumulate(std::span<const double> x, double a, double b, std::span<double> acc) {
  for (std::size_t i = 0; i < x.size(); ++i) acc[i] += a * x[i] + b * x[i] * x[i];
}

}  // namespace

const KernelTable scalar_table{
    &sum_squares, &dot, &squared_distance,
    &scaled_difference, &scale, &clamp_nonnegative, &poly_sum, &poly_accumulate,
};

}  // namespace countrank::kernels::detail
