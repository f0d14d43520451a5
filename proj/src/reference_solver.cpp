#include "countrank/reference_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "countrank/error.hpp"
#include "countrank/linalg.hpp"

namespace countrank {
namespace {

using Eigen::MatrixXd;

// Applies f to the singular values of a: U diag(f(sigma)) V^T.
template <typename F>
MatrixXd spectral_map(const MatrixXd& a, F f) {
  Eigen::BDCSVD<MatrixXd> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) throw NumericalError("SVD failed to converge");
  Eigen::VectorXd s = solver.singularValues();
  for (Eigen::Index k = 0; k < s.size(); ++k) s(k) = f(s(k));
  return solver.matrixU() * s.asDiagonal() * solver.matrixV().transpose();
}

}  // namespace

ReferenceSolution reference_solver_dantzig(const MaskedObservations& obs, double p, double delta,
                                           const ReferenceSolverOptions& options) {
  if (!(p > 0.0 && p <= 1.0)) throw DataError("sampling probability p must lie in (0, 1]");
  if (!(delta > 0.0)) throw DataError("reference solver requires delta > 0");

  // Work in V = pW:  min ||V||_*  s.t.  ||V - Y|| <= delta.
  const MatrixXd y = mask_adjoint(obs).view();
  const double scale = std::max(y.norm(), 1.0);
  const double rho = 1.0 / delta;
  const double shrink = 1.0 / rho;

  MatrixXd z = y;
  MatrixXd u = MatrixXd::Zero(y.rows(), y.cols());
  MatrixXd v;
  ReferenceSolution out;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    // Nuclear-norm proximal step.
    v = spectral_map(z - u, [shrink](double s) { return std::max(s - shrink, 0.0); });
    // Projection onto the operator-norm ball around Y clips singular values of the offset.
    const MatrixXd z_prev = z;
    z = y + spectral_map(v + u - y, [delta](double s) { return std::min(s, delta); });
    u += v - z;

    out.iterations = it;
    out.primal_residual = (v - z).norm() / scale;
    out.dual_residual = (z - z_prev).norm() / scale;
    if (out.primal_residual <= options.tol && out.dual_residual <= options.tol) {
      out.estimate = DenseMatrix(RowMajorMatrix(z / p));
      return out;
    }
  }
  throw NumericalError("reference solver: iteration budget of " +
                       std::to_string(options.max_iterations) + " exhausted (primal " +
                       std::to_string(out.primal_residual) + ", dual " +
                       std::to_string(out.dual_residual) + ")");
}

}  // namespace countrank
