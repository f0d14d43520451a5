#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace countrank {

struct CalibrationGridPoint {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank = 1;
  double p = 1.0;
  double lambda_max = 1.0;
};

/// Random nonnegative low-rank truths over sizes {30x30, 60x40, 100x100},
/// p in {0.3, 0.5, 1}, lambda_max in {1, 20}, rank 2.
std::vector<CalibrationGridPoint> standard_calibration_grid();

struct CalibrationOptions {
  std::vector<CalibrationGridPoint> grid;  ///< empty means the standard grid
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  double C0 = 8.0;
};

struct CalibrationPointResult {
  CalibrationGridPoint point;
  /// Smallest C whose A(M, p, eps) covers a (1 - eps) fraction of the trial deviations.
  double required_c = 0.0;
  double coverage_at_fit = 0.0;
  double max_deviation = 0.0;
  /// 2 sqrt(p) sigma_tilde + 8 eps / sqrt(mn), the part of A that does not scale with C.
  double fixed_terms = 0.0;
};

struct CalibrationResult {
  double C = 0.0;
  /// True when every grid point was covered without the C term; C is then the floor value.
  bool floored = false;
  double epsilon = 0.0;
  std::size_t trials = 0;
  std::vector<CalibrationPointResult> points;
};

inline constexpr double kCalibrationFloor = 1e-6;

/// Fits the smallest C giving at least 1 - eps empirical coverage of ||A_Omega^*(X) - pM|| <= A
/// at every grid point, floored at kCalibrationFloor.
CalibrationResult calibrate_C(const CalibrationOptions& options);

}  // namespace countrank
