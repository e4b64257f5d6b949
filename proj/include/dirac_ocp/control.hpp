// The reduced optimal control problem over the source amplitudes u in R^ell:
// cost, adjoint-based gradient, projection formula, projected-gradient solve
// (Barzilai-Borwein step with Armijo backtracking), reduced Hessian and
// second-order condition diagnostics.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dirac_ocp/pde.hpp"

namespace dirac_ocp {

struct ControlBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;  // lower(z) < upper(z) for every z
};

struct SolverTolerances {
  double lin = 1e-12;
  double newton = 1e-10;
  double kkt = 1e-9;
};

enum class ActiveTag { lower, upper, free_ };

struct KktDiagnostics {
  Eigen::VectorXd psi;           // psi_z = p(z) + alpha u_z
  double projection_residual = 0.0;  // |u - clamp(-p(z)/alpha)|_inf
  std::vector<ActiveTag> active_set;
};

struct SoscReport {
  double tau = 0.0;
  double kappa_min = 0.0;
  std::vector<int> critical_set;  // indices with |psi_z| <= tau
  // Smallest eigenvalue of the reduced Hessian restricted to the critical
  // coordinates; empty when the critical set is empty (vacuously positive).
  std::optional<double> min_eigenvalue;
  bool positive = false;
};

class OptimizerStalled : public Error {
public:
  OptimizerStalled(const std::string& what, KktDiagnostics diagnostics)
      : Error(what), diagnostics_(std::move(diagnostics)) {}
  const KktDiagnostics& diagnostics() const { return diagnostics_; }

private:
  KktDiagnostics diagnostics_;
};

// Full reduced problem: state system plus cost data and box constraints.
struct ReducedProblem {
  StateSystem sys;
  ScalarField y_d;
  double alpha = 1.0;
  ControlBounds bounds;
  SolverTolerances tol;
};

ReducedProblem make_reduced_problem(MeshPtr mesh, const Nonlinearity& nl,
                                    const Eigen::MatrixXd& source_points,
                                    ScalarField y_d, double alpha,
                                    ControlBounds bounds,
                                    SolverTolerances tol = {});

// Componentwise clamp onto [lower, upper].
Eigen::VectorXd project(const Eigen::VectorXd& u, const ControlBounds& bounds);

// j(u) = 1/2 |S_h u - y_d|^2_L2 + alpha/2 |u|^2. Reuses `warm_state` as the
// Newton initial guess; exposes the converged state through `state_out`.
double cost(const ReducedProblem& problem, const Eigen::VectorXd& u,
            const FeFunction* warm_state = nullptr, FeFunction* state_out = nullptr);

// Gradient components psi_z = p_h(z) + alpha u_z via one adjoint solve.
Eigen::VectorXd reduced_gradient(const ReducedProblem& problem,
                                 const Eigen::VectorXd& u,
                                 const FeFunction* warm_state = nullptr,
                                 FeFunction* state_out = nullptr,
                                 FeFunction* adjoint_out = nullptr);

KktDiagnostics kkt_diagnostics(const ReducedProblem& problem,
                               const Eigen::VectorXd& u, const FeFunction& adjoint);

struct OcpOptions {
  int max_iter = 500;
  double armijo_c1 = 1e-4;
  int max_backtracks = 60;
  const FeFunction* warm_state = nullptr;
  // Called once per outer iteration with (iter, j, projection_residual, step).
  std::function<void(int, double, double, double)> trace;
};

struct OcpResult {
  Eigen::VectorXd u;
  FeFunction state;
  FeFunction adjoint;
  KktDiagnostics kkt;
  double j = 0.0;
  int iterations = 0;
};

// Projected gradient iteration until the discrete projection formula holds
// with residual <= tol.kkt. Deterministic given u0. Throws OptimizerStalled
// (diagnostics attached) when the iteration budget is exhausted.
OcpResult solve_ocp(const ReducedProblem& problem, const Eigen::VectorXd& u0,
                    const OcpOptions& options = {});

// Entries  (phi_z, phi_w)_L2 + alpha delta_zw - (p a_yy(., y) phi_z phi_w, 1);
// assembled from ell linearized solves, symmetric by construction.
Eigen::MatrixXd reduced_hessian(const ReducedProblem& problem,
                                const Eigen::VectorXd& u, int threads = 1);

// Restricts the reduced Hessian to {z : |psi_z| <= tau} and reports its
// smallest eigenvalue; verdict positive when it is >= kappa_min (vacuously
// positive for an empty critical set). Ties |psi_z| = tau are included.
SoscReport check_sosc(const ReducedProblem& problem, const Eigen::VectorXd& u_bar,
                      double tau, double kappa_min, int threads = 1);

// Worst margin of the discrete variational inequality j'(u_bar)(u - u_bar)
// over `samples` seeded random box-feasible controls: the minimum over the
// sample of  psi . (u - u_bar) / |u - u_bar|.
double variational_inequality_margin(const ReducedProblem& problem,
                                     const Eigen::VectorXd& u_bar,
                                     const Eigen::VectorXd& psi, int samples,
                                     unsigned long long seed);

}  // namespace dirac_ocp
