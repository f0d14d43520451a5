#include "countrank/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SVD>

#include "countrank/error.hpp"
#include "countrank/kernels.hpp"

namespace countrank {
namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DataError(std::string(what) + ": dimension mismatch (" + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()) + ")");
  }
}

template <typename Solver>
void check_solver(const Solver& solver) {
  if (solver.info() != Eigen::Success) throw NumericalError("SVD failed to converge");
}

}  // namespace

DenseMatrix SvdFactorization::reconstruct() const {
  const auto k = static_cast<Eigen::Index>(singular_values.size());
  const Eigen::Map<const Eigen::VectorXd> s(singular_values.data(), k);
  RowMajorMatrix out = left.view() * s.asDiagonal() * right.view().transpose();
  return DenseMatrix(out);
}

SvdFactorization svd(const DenseMatrix& a) {
  const Eigen::MatrixXd m = a.view();
  Eigen::BDCSVD<Eigen::MatrixXd> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  check_solver(solver);
  const Eigen::VectorXd& s = solver.singularValues();
  return SvdFactorization{DenseMatrix(RowMajorMatrix(solver.matrixU())),
                          std::vector<double>(s.data(), s.data() + s.size()),
                          DenseMatrix(RowMajorMatrix(solver.matrixV()))};
}

std::vector<double> singular_values(const DenseMatrix& a) {
  const Eigen::MatrixXd m = a.view();
  Eigen::BDCSVD<Eigen::MatrixXd> solver(m);
  check_solver(solver);
  const Eigen::VectorXd& s = solver.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

double frobenius_norm(const DenseMatrix& a) { return std::sqrt(kernels::sum_squares(a.entries())); }

double operator_norm(const DenseMatrix& a) { return singular_values(a).front(); }

double nuclear_norm(const DenseMatrix& a) {
  const auto s = singular_values(a);
  return std::accumulate(s.begin(), s.end(), 0.0);
}

std::size_t numerical_rank(std::span<const double> sv, double rel_tol) {
  if (sv.empty()) return 0;
  const double top = *std::max_element(sv.begin(), sv.end());
  if (top <= 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(sv.begin(), sv.end(), [&](double s) { return s > rel_tol * top; }));
}

std::size_t numerical_rank(const DenseMatrix& a, double rel_tol) {
  return numerical_rank(singular_values(a), rel_tol);
}

double inner_product(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "inner_product");
  return kernels::dot(a.entries(), b.entries());
}

double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "frobenius_distance");
  return std::sqrt(kernels::squared_distance(a.entries(), b.entries()));
}

DenseMatrix scaled_difference(const DenseMatrix& a, const DenseMatrix& b, double s) {
  require_same_shape(a, b, "scaled_difference");
  DenseMatrix out(a.rows(), a.cols());
  kernels::scaled_difference(a.entries(), b.entries(), s, out.entries());
  return out;
}

DenseMatrix scaled(DenseMatrix a, double s) {
  kernels::scale(a.entries(), s);
  return a;
}

std::vector<double> apply_mask(const DenseMatrix& a, const Mask& mask) {
  if (a.rows() != mask.rows() || a.cols() != mask.cols()) {
    throw DataError("apply_mask: matrix is " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " but mask is " + std::to_string(mask.rows()) + "x" +
                    std::to_string(mask.cols()));
  }
  std::vector<double> out;
  out.reserve(mask.size());
  for (const Cell c : mask.cells()) out.push_back(a(c.row, c.col));
  return out;
}

DenseMatrix mask_adjoint(const Mask& mask, std::span<const double> values) {
  if (values.size() != mask.size()) throw DataError("mask_adjoint: one value per mask cell required");
  DenseMatrix out(mask.rows(), mask.cols());
  const auto cells = mask.cells();
  for (std::size_t k = 0; k < cells.size(); ++k) out(cells[k].row, cells[k].col) = values[k];
  return out;
}

DenseMatrix mask_adjoint(const MaskedObservations& obs) {
  DenseMatrix out(obs.rows(), obs.cols());
  const auto cells = obs.mask().cells();
  const auto counts = obs.counts();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    out(cells[k].row, cells[k].col) = static_cast<double>(counts[k]);
  }
  return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DataError("multiply: inner dimensions differ");
  RowMajorMatrix out = a.view() * b.view();
  return DenseMatrix(out);
}

DenseMatrix scale_rows(DenseMatrix a, std::span<const double> factors) {
  if (factors.size() != a.rows()) throw DataError("scale_rows: one factor per row required");
  for (std::size_t i = 0; i < a.rows(); ++i) kernels::scale(a.row(i), factors[i]);
  return a;
}

}  // namespace countrank
