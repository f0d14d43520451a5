#pragma once

#include <cstddef>

#include "countrank/dense_matrix.hpp"

namespace countrank {

struct ReferenceSolverOptions {
  double tol = 1e-5;
  std::size_t max_iterations = 5000;
};

struct ReferenceSolution {
  DenseMatrix estimate;
  std::size_t iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

/// Iterative solver for  min ||W||_*  s.t.  ||A_Omega^*(X) - p W|| <= delta,  used as an
/// independent check on the closed form. ADMM splitting between the nuclear norm and
/// the operator-norm ball; the returned iterate is the ball-projected one, so it is
/// always feasible. Throws NumericalError when the iteration budget runs out and
/// DataError when delta <= 0.
ReferenceSolution reference_solver_dantzig(const MaskedObservations& obs, double p, double delta,
                                           const ReferenceSolverOptions& options = {});

}  // namespace countrank
