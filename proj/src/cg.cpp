#include "dirac_ocp/cg.hpp"

#include <cmath>

#include "dirac_ocp/errors.hpp"

namespace dirac_ocp {

Eigen::VectorXd solve_spd(const SparseOperator& op, const Eigen::VectorXd& rhs,
                          const CgOptions& options, CgReport* report) {
  const int n = static_cast<int>(rhs.size());
  const double rhs_norm = rhs.norm();
  if (report) *report = CgReport{};
  if (n == 0) return Eigen::VectorXd();
  if (rhs_norm == 0.0) return Eigen::VectorXd::Zero(n);

  Eigen::VectorXd inv_diag(n);
  if (options.jacobi) {
    inv_diag = op.diagonal().cwiseInverse();
  } else {
    inv_diag.setOnes();
  }

  Eigen::VectorXd x = options.initial_guess ? *options.initial_guess
                                            : Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = rhs - op * x;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);

  const int max_iter = options.max_iter > 0
                           ? options.max_iter
                           : 50 + 20 * static_cast<int>(std::sqrt(double(n)));
  const double target = options.tol * rhs_norm;

  int it = 0;
  while (it < max_iter) {
    if (r.norm() <= target) {
      // Recurrence residual may drift; confirm with the true residual.
      r = rhs - op * x;
      if (r.norm() <= target) break;
      z = inv_diag.cwiseProduct(r);
      p = z;
      rz = r.dot(z);
    }
    Eigen::VectorXd Ap = op * p;
    double pAp = p.dot(Ap);
    if (!(pAp > 0.0))
      throw LinearSolveFailure("conjugate gradients hit a nonpositive curvature "
                               "direction; operator is not SPD");
    double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    z = inv_diag.cwiseProduct(r);
    double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
    ++it;
  }

  double final_rel = (rhs - op * x).norm() / rhs_norm;
  if (report) *report = CgReport{it, final_rel};
  if (final_rel > options.tol)
    throw LinearSolveFailure("conjugate gradients did not reach tolerance " +
                             std::to_string(options.tol) + " within " +
                             std::to_string(max_iter) + " iterations (residual " +
                             std::to_string(final_rel) + ")");
  return x;
}

}  // namespace dirac_ocp
