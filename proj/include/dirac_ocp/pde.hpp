// Damped-Newton solution of the discrete semilinear state equation with
// Dirac loads, plus the linearized-state, second-linearized-state and adjoint
// solves. All solves share the operator  K + M_w  with w = a_y(., y_h).
#pragma once

#include "dirac_ocp/assembly.hpp"
#include "dirac_ocp/cg.hpp"
#include "dirac_ocp/fe_function.hpp"
#include "dirac_ocp/nonlinearity.hpp"

namespace dirac_ocp {

struct NewtonReport {
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();  // infinity norm
  int damping_steps = 0;
  bool converged = false;
  std::vector<double> residual_history;  // per accepted iterate, incl. initial
};

class NonlinearSolveFailure : public Error {
public:
  NonlinearSolveFailure(const std::string& what, NewtonReport report)
      : Error(what), report_(report) {}
  const NewtonReport& report() const { return report_; }

private:
  NewtonReport report_;
};

// State problem bundle: mesh, nonlinearity, located sources and the stiffness
// matrix, assembled once and reused by every solve on this mesh.
struct StateSystem {
  MeshPtr mesh;
  Nonlinearity nl;
  DiracSources sources;
  SparseOperator stiffness;  // interior dofs
};

StateSystem make_state_system(MeshPtr mesh, Nonlinearity nl,
                              const Eigen::MatrixXd& source_points);

struct NewtonOptions {
  double tol_newton = 1e-10;  // infinity norm of the algebraic residual
  double tol_lin = 1e-12;
  int max_iter = 50;
  int max_damping = 30;
  const FeFunction* initial_guess = nullptr;  // default: zero
};

// Solves  K y + N(y) = F(u)  with N_i = integral a(x, y_h) phi_i. Unique by
// monotonicity. Throws NonlinearSolveFailure on stagnation (report attached).
FeFunction solve_state(const StateSystem& sys, const Eigen::VectorXd& u,
                       const NewtonOptions& options = {},
                       NewtonReport* report = nullptr);

// Newton step operator  K + M_w,  w(x) = a_y(x, y_h(x)); SPD since w >= 0.
SparseOperator newton_step_operator(const StateSystem& sys, const FeFunction& y);
SparseOperator newton_step_operator(const TriMesh& mesh, const FeFunction& y,
                                    const Nonlinearity& nl);

// First derivative of the control-to-state map in direction v:
// (K + M_w) phi = dirac_load(D, v).
FeFunction solve_linearized_state(const StateSystem& sys, const FeFunction& y,
                                  const Eigen::VectorXd& v, double tol_lin = 1e-12);

// Second derivative: (K + M_w) phi = -(a_yy(., y) phi_v phi_w, phi_i).
FeFunction solve_second_linearized(const StateSystem& sys, const FeFunction& y,
                                   const FeFunction& phi_v, const FeFunction& phi_w,
                                   double tol_lin = 1e-12);

// Adjoint state: (K + M_w) p = ((y - y_d), phi_i).
FeFunction solve_adjoint(const StateSystem& sys, const FeFunction& y,
                         const ScalarField& y_d, double tol_lin = 1e-12);

}  // namespace dirac_ocp
