#pragma once

#include <span>
#include <string>
#include <vector>

#include "countrank/dense_matrix.hpp"

namespace countrank {

/// Convex post-projections. Simplex projections already enforce nonnegativity;
/// global_simplex and row_simplex are mutually exclusive.
enum class Projection : unsigned {
  none = 0,
  nonnegative = 1u << 0,
  global_simplex = 1u << 1,
  row_simplex = 1u << 2,
};

constexpr Projection operator|(Projection a, Projection b) {
  return static_cast<Projection>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}
constexpr bool has(Projection set, Projection flag) {
  return (static_cast<unsigned>(set) & static_cast<unsigned>(flag)) != 0;
}

/// "nonnegative", "global_simplex", "row_simplex"; throws DataError otherwise.
Projection parse_projection(const std::string& name);
std::vector<std::string> projection_names(Projection set);

/// Euclidean projection of v onto {x >= 0, sum x = 1} by sort-and-threshold.
std::vector<double> project_simplex(std::span<const double> v);

DenseMatrix project_nonnegative(DenseMatrix a);
/// Treats all entries as one vector on the probability simplex.
DenseMatrix project_global_simplex(const DenseMatrix& a);
DenseMatrix project_rows_simplex(DenseMatrix a);

/// Applies the requested projections (nonnegative first, then the simplex flag).
DenseMatrix apply_projections(DenseMatrix a, Projection set);

}  // namespace countrank
