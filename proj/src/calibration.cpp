#include "countrank/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "countrank/bench.hpp"
#include "countrank/bounds.hpp"
#include "countrank/error.hpp"
#include "countrank/linalg.hpp"
#include "countrank/philox.hpp"
#include "countrank/sampling.hpp"

namespace countrank {

std::vector<CalibrationGridPoint> standard_calibration_grid() {
  std::vector<CalibrationGridPoint> grid;
  const std::size_t sizes[][2] = {{30, 30}, {60, 40}, {100, 100}};
  for (const auto& sz : sizes)
    for (double p : {0.3, 0.5, 1.0})
      for (double lm : {1.0, 20.0}) grid.push_back({sz[0], sz[1], 2, p, lm});
  return grid;
}

CalibrationResult calibrate_C(const CalibrationOptions& opt) {
  if (opt.trials < 1) throw DataError("calibration needs trials >= 1");
  BoundConfig cfg;
  cfg.epsilon = opt.epsilon;
  cfg.C0 = opt.C0;
  cfg.C = 1.0;
  cfg.validate();
  const auto grid = opt.grid.empty() ? standard_calibration_grid() : opt.grid;

  CalibrationResult res;
  res.epsilon = opt.epsilon;
  res.trials = opt.trials;
  double fitted = kCalibrationFloor;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& pt = grid[g];
    const std::uint64_t point_seed = rng::derive_seed(opt.seed, g);
    const DenseMatrix m = bench::random_low_rank(pt.rows, pt.cols, pt.rank, pt.lambda_max, point_seed);
    // A = fixed + C * unit, so each trial needs C >= (deviation - fixed) / unit.
    cfg.C = 1.0;
    const double with_one = opnorm_bound_A(m, pt.p, cfg);
    cfg.C = 2.0;
    const double unit = opnorm_bound_A(m, pt.p, cfg) - with_one;
    const double fixed = with_one - unit;

    std::vector<double> required;
    required.reserve(opt.trials);
    CalibrationPointResult out;
    out.point = pt;
    out.fixed_terms = fixed;
    for (std::size_t t = 0; t < opt.trials; ++t) {
      const std::uint64_t seed = rng::derive_seed(point_seed, t);
      const Mask mask = sample_bernoulli_mask(pt.rows, pt.cols, {pt.p, rng::derive_seed(seed, 0)});
      const auto obs = sample_poisson(m, mask, rng::derive_seed(seed, 1));
      const double dev = operator_norm(scaled_difference(mask_adjoint(obs), m, pt.p));
      out.max_deviation = std::max(out.max_deviation, dev);
      required.push_back((dev - fixed) / unit);
    }
    std::sort(required.begin(), required.end());
    // Smallest C covering ceil((1 - eps) T) trials.
    const auto need = static_cast<std::size_t>(std::ceil((1.0 - opt.epsilon) * static_cast<double>(opt.trials) - 1e-9));
    out.required_c = need == 0 ? required.front() : required[std::min(need, required.size()) - 1];
    const double c_here = std::max(out.required_c, kCalibrationFloor);
    out.coverage_at_fit = static_cast<double>(std::upper_bound(required.begin(), required.end(), c_here) -
                                              required.begin()) /
                          static_cast<double>(opt.trials);
    fitted = std::max(fitted, out.required_c);
    res.points.push_back(out);
  }
  res.C = fitted;
  res.floored = fitted == kCalibrationFloor;
  return res;
}

}  // namespace countrank
