// Jacobi-preconditioned conjugate gradients for SPD operators. Deterministic:
// fixed arithmetic order, no threading.
#pragma once

#include <Eigen/Dense>

#include "dirac_ocp/assembly.hpp"

namespace dirac_ocp {

struct CgOptions {
  double tol = 1e-12;   // relative residual |b - A x| / |b|
  int max_iter = -1;    // -1: 50 + 20 * sqrt(n)
  bool jacobi = true;
  const Eigen::VectorXd* initial_guess = nullptr;
};

struct CgReport {
  int iterations = 0;
  double rel_residual = 0.0;
};

// Throws LinearSolveFailure when the iteration budget is exhausted before the
// true residual meets the tolerance.
Eigen::VectorXd solve_spd(const SparseOperator& op, const Eigen::VectorXd& rhs,
                          const CgOptions& options = {}, CgReport* report = nullptr);

}  // namespace dirac_ocp
