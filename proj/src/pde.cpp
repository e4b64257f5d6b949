#include "dirac_ocp/pde.hpp"

#include <cmath>

namespace dirac_ocp {

StateSystem make_state_system(MeshPtr mesh, Nonlinearity nl,
                              const Eigen::MatrixXd& source_points) {
  StateSystem sys;
  sys.sources = locate_sources(*mesh, source_points);
  sys.stiffness = assemble_stiffness(*mesh);
  sys.mesh = std::move(mesh);
  sys.nl = std::move(nl);
  return sys;
}

SparseOperator newton_step_operator(const StateSystem& sys, const FeFunction& y) {
  return newton_step_operator(*sys.mesh, y, sys.nl);
}

SparseOperator newton_step_operator(const TriMesh& mesh, const FeFunction& y,
                                    const Nonlinearity& nl) {
  SparseOperator op = assemble_stiffness(mesh);
  op += assemble_weighted_mass(mesh, nl.a_y, y);
  return op;
}

namespace {

Eigen::VectorXd state_residual(const StateSystem& sys, const FeFunction& y,
                               const Eigen::VectorXd& load) {
  return sys.stiffness * interior_of(y) +
         assemble_semilinear_residual(*sys.mesh, y, sys.nl) - load;
}

}  // namespace

FeFunction solve_state(const StateSystem& sys, const Eigen::VectorXd& u,
                       const NewtonOptions& options, NewtonReport* report) {
  const TriMesh& mesh = *sys.mesh;
  Eigen::VectorXd load = dirac_load_vector(mesh, sys.sources, u);

  FeFunction y = options.initial_guess ? *options.initial_guess
                                       : zero_function(sys.mesh);
  Eigen::VectorXd residual = state_residual(sys, y, load);

  NewtonReport rep;
  rep.residual = residual.size() ? residual.lpNorm<Eigen::Infinity>() : 0.0;
  rep.residual_history.push_back(rep.residual);

  CgOptions cg;
  cg.tol = options.tol_lin;

  while (rep.residual > options.tol_newton && rep.iterations < options.max_iter) {
    SparseOperator jac = sys.stiffness;
    jac += assemble_weighted_mass(mesh, sys.nl.a_y, y);
    Eigen::VectorXd step = solve_spd(jac, -residual, cg);

    // Backtracking on the residual infinity norm; monotone problems accept
    // the full step once near the solution.
    double s = 1.0;
    Eigen::VectorXd y_int = interior_of(y);
    FeFunction y_trial;
    Eigen::VectorXd residual_trial;
    double norm_trial = 0.0;
    int backtracks = 0;
    for (;; ++backtracks) {
      y_trial = from_interior(sys.mesh, y_int + s * step);
      residual_trial = state_residual(sys, y_trial, load);
      norm_trial = residual_trial.lpNorm<Eigen::Infinity>();
      if (norm_trial < rep.residual || backtracks >= options.max_damping) break;
      s *= 0.5;
    }
    rep.damping_steps += backtracks;
    ++rep.iterations;
    if (!(norm_trial < rep.residual)) {
      rep.residual = std::min(rep.residual, norm_trial);
      if (report) *report = rep;
      throw NonlinearSolveFailure("Newton stagnated at residual " +
                                      std::to_string(rep.residual),
                                  rep);
    }
    y = std::move(y_trial);
    residual = std::move(residual_trial);
    rep.residual = norm_trial;
    rep.residual_history.push_back(norm_trial);
  }

  rep.converged = rep.residual <= options.tol_newton;
  if (report) *report = rep;
  if (!rep.converged)
    throw NonlinearSolveFailure("Newton did not converge within " +
                                    std::to_string(options.max_iter) +
                                    " iterations (residual " +
                                    std::to_string(rep.residual) + ")",
                                rep);
  return y;
}

FeFunction solve_linearized_state(const StateSystem& sys, const FeFunction& y,
                                  const Eigen::VectorXd& v, double tol_lin) {
  SparseOperator op = newton_step_operator(sys, y);
  Eigen::VectorXd rhs = dirac_load_vector(*sys.mesh, sys.sources, v);
  CgOptions cg;
  cg.tol = tol_lin;
  return from_interior(sys.mesh, solve_spd(op, rhs, cg));
}

FeFunction solve_second_linearized(const StateSystem& sys, const FeFunction& y,
                                   const FeFunction& phi_v, const FeFunction& phi_w,
                                   double tol_lin) {
  SparseOperator op = newton_step_operator(sys, y);
  Eigen::VectorXd rhs = -assemble_load_with<3>(
      *sys.mesh, {&y, &phi_v, &phi_w},
      [&](const Eigen::Vector3d& x, const std::array<double, 3>& vals) {
        return sys.nl.a_yy(x, vals[0]) * vals[1] * vals[2];
      });
  CgOptions cg;
  cg.tol = tol_lin;
  return from_interior(sys.mesh, solve_spd(op, rhs, cg));
}

FeFunction solve_adjoint(const StateSystem& sys, const FeFunction& y,
                         const ScalarField& y_d, double tol_lin) {
  SparseOperator op = newton_step_operator(sys, y);
  Eigen::VectorXd rhs = assemble_load_with<1>(
      *sys.mesh, {&y},
      [&](const Eigen::Vector3d& x, const std::array<double, 1>& vals) {
        return vals[0] - y_d(x);
      });
  CgOptions cg;
  cg.tol = tol_lin;
  return from_interior(sys.mesh, solve_spd(op, rhs, cg));
}

}  // namespace dirac_ocp
