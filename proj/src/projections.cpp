#include "countrank/projections.hpp"

#include <algorithm>
#include <functional>

#include "countrank/error.hpp"
#include "countrank/kernels.hpp"

namespace countrank {

Projection parse_projection(const std::string& name) {
  if (name == "none") return Projection::none;
  if (name == "nonnegative") return Projection::nonnegative;
  if (name == "global_simplex") return Projection::global_simplex;
  if (name == "row_simplex") return Projection::row_simplex;
  throw DataError("unknown projection '" + name + "'");
}

std::vector<std::string> projection_names(Projection set) {
  std::vector<std::string> out;
  if (has(set, Projection::nonnegative)) out.emplace_back("nonnegative");
  if (has(set, Projection::global_simplex)) out.emplace_back("global_simplex");
  if (has(set, Projection::row_simplex)) out.emplace_back("row_simplex");
  return out;
}

std::vector<double> project_simplex(std::span<const double> v) {
  if (v.empty()) throw DataError("cannot project an empty vector onto the simplex");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    running += sorted[j];
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x -= theta;
  kernels::clamp_nonnegative(out);
  return out;
}

DenseMatrix project_nonnegative(DenseMatrix a) {
  kernels::clamp_nonnegative(a.entries());
  return a;
}

DenseMatrix project_global_simplex(const DenseMatrix& a) {
  return DenseMatrix(a.rows(), a.cols(), project_simplex(a.entries()));
}

DenseMatrix project_rows_simplex(DenseMatrix a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto projected = project_simplex(a.row(i));
    std::copy(projected.begin(), projected.end(), a.row(i).begin());
  }
  return a;
}

DenseMatrix apply_projections(DenseMatrix a, Projection set) {
  if (has(set, Projection::global_simplex) && has(set, Projection::row_simplex)) {
    throw DataError("global_simplex and row_simplex projections are mutually exclusive");
  }
  if (has(set, Projection::nonnegative)) a = project_nonnegative(std::move(a));
  if (has(set, Projection::global_simplex)) a = project_global_simplex(a);
  if (has(set, Projection::row_simplex)) a = project_rows_simplex(std::move(a));
  return a;
}

}  // namespace countrank
