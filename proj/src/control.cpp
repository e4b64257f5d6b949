#include "dirac_ocp/control.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <thread>

namespace dirac_ocp {

ReducedProblem make_reduced_problem(MeshPtr mesh, const Nonlinearity& nl,
                                    const Eigen::MatrixXd& source_points,
                                    ScalarField y_d, double alpha,
                                    ControlBounds bounds, SolverTolerances tol) {
  ReducedProblem p;
  p.sys = make_state_system(std::move(mesh), nl, source_points);
  p.y_d = std::move(y_d);
  p.alpha = alpha;
  p.bounds = std::move(bounds);
  p.tol = tol;
  return p;
}

Eigen::VectorXd project(const Eigen::VectorXd& u, const ControlBounds& bounds) {
  return u.cwiseMax(bounds.lower).cwiseMin(bounds.upper);
}

namespace {

FeFunction solve_state_for(const ReducedProblem& problem, const Eigen::VectorXd& u,
                           const FeFunction* warm) {
  NewtonOptions opt;
  opt.tol_newton = problem.tol.newton;
  opt.tol_lin = problem.tol.lin;
  opt.initial_guess = warm;
  return solve_state(problem.sys, u, opt);
}

double tracking_term(const ReducedProblem& problem, const FeFunction& y) {
  return integrate_with<1>(
      *problem.sys.mesh, {&y},
      [&](const Eigen::Vector3d& x, const std::array<double, 1>& v) {
        double d = v[0] - problem.y_d(x);
        return d * d;
      });
}

}  // namespace

double cost(const ReducedProblem& problem, const Eigen::VectorXd& u,
            const FeFunction* warm_state, FeFunction* state_out) {
  FeFunction y = solve_state_for(problem, u, warm_state);
  double j = 0.5 * tracking_term(problem, y) + 0.5 * problem.alpha * u.squaredNorm();
  if (state_out) *state_out = std::move(y);
  return j;
}

Eigen::VectorXd reduced_gradient(const ReducedProblem& problem,
                                 const Eigen::VectorXd& u,
                                 const FeFunction* warm_state,
                                 FeFunction* state_out, FeFunction* adjoint_out) {
  FeFunction y = solve_state_for(problem, u, warm_state);
  FeFunction p = solve_adjoint(problem.sys, y, problem.y_d, problem.tol.lin);
  Eigen::VectorXd psi(u.size());
  for (int z = 0; z < u.size(); ++z)
    psi(z) = source_value(p, problem.sys.sources, z) + problem.alpha * u(z);
  if (state_out) *state_out = std::move(y);
  if (adjoint_out) *adjoint_out = std::move(p);
  return psi;
}

KktDiagnostics kkt_diagnostics(const ReducedProblem& problem,
                               const Eigen::VectorXd& u, const FeFunction& adjoint) {
  KktDiagnostics d;
  const int ell = static_cast<int>(u.size());
  d.psi.resize(ell);
  Eigen::VectorXd target(ell);
  for (int z = 0; z < ell; ++z) {
    double pz = source_value(adjoint, problem.sys.sources, z);
    d.psi(z) = pz + problem.alpha * u(z);
    target(z) = -pz / problem.alpha;
  }
  Eigen::VectorXd projected = project(target, problem.bounds);
  d.projection_residual = (u - projected).lpNorm<Eigen::Infinity>();
  d.active_set.resize(ell);
  for (int z = 0; z < ell; ++z) {
    if (u(z) == problem.bounds.lower(z))
      d.active_set[z] = ActiveTag::lower;
    else if (u(z) == problem.bounds.upper(z))
      d.active_set[z] = ActiveTag::upper;
    else
      d.active_set[z] = ActiveTag::free_;
  }
  return d;
}

OcpResult solve_ocp(const ReducedProblem& problem, const Eigen::VectorXd& u0,
                    const OcpOptions& options) {
  OcpResult res;
  res.u = project(u0, problem.bounds);

  FeFunction y;
  res.j = cost(problem, res.u, options.warm_state, &y);
  FeFunction p = solve_adjoint(problem.sys, y, problem.y_d, problem.tol.lin);
  Eigen::VectorXd g(res.u.size());
  for (int z = 0; z < res.u.size(); ++z)
    g(z) = source_value(p, problem.sys.sources, z) + problem.alpha * res.u(z);

  const double step0 = 1.0 / problem.alpha;
  double step = step0;
  Eigen::VectorXd u_prev, g_prev;

  for (int it = 0;; ++it) {
    KktDiagnostics diag = kkt_diagnostics(problem, res.u, p);
    if (options.trace) options.trace(it, res.j, diag.projection_residual, step);
    if (diag.projection_residual <= problem.tol.kkt) {
      res.state = std::move(y);
      res.adjoint = std::move(p);
      res.kkt = std::move(diag);
      res.iterations = it;
      return res;
    }
    if (it >= options.max_iter)
      throw OptimizerStalled("projected gradient reached the iteration budget (" +
                                 std::to_string(options.max_iter) +
                                 ") with projection residual " +
                                 std::to_string(diag.projection_residual),
                             diag);

    // Barzilai-Borwein step length, safeguarded around 1/alpha.
    if (it > 0) {
      Eigen::VectorXd du = res.u - u_prev, dg = g - g_prev;
      double dudg = du.dot(dg);
      step = dudg > 0 ? du.squaredNorm() / dudg : 2.0 * step;
      step = std::clamp(step, 1e-8 * step0, 1e8 * step0);
    }

    // Armijo backtracking on the projected step.
    double j_trial = 0.0;
    Eigen::VectorXd u_trial;
    FeFunction y_trial;
    bool accepted = false;
    for (int bt = 0; bt <= options.max_backtracks; ++bt) {
      u_trial = project(res.u - step * g, problem.bounds);
      Eigen::VectorXd d = u_trial - res.u;
      if (d.lpNorm<Eigen::Infinity>() == 0.0) break;  // step collapsed onto u
      j_trial = cost(problem, u_trial, &y, &y_trial);
      if (j_trial <= res.j + options.armijo_c1 * g.dot(d)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      throw OptimizerStalled(
          "projected gradient line search failed (projection residual " +
              std::to_string(diag.projection_residual) + ")",
          diag);

    u_prev = res.u;
    g_prev = g;
    res.u = u_trial;
    res.j = j_trial;
    y = std::move(y_trial);
    p = solve_adjoint(problem.sys, y, problem.y_d, problem.tol.lin);
    for (int z = 0; z < res.u.size(); ++z)
      g(z) = source_value(p, problem.sys.sources, z) + problem.alpha * res.u(z);
  }
}

namespace {

// Run fn(i) for i in [0, n) on up to `threads` workers; results are written
// by index so the outcome does not depend on the thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += threads) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

Eigen::MatrixXd reduced_hessian(const ReducedProblem& problem,
                                const Eigen::VectorXd& u, int threads) {
  const int ell = static_cast<int>(u.size());
  FeFunction y = solve_state_for(problem, u, nullptr);
  FeFunction p = solve_adjoint(problem.sys, y, problem.y_d, problem.tol.lin);

  std::vector<FeFunction> phi(ell);
  parallel_for(ell, threads, [&](int z) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(ell);
    e(z) = 1.0;
    phi[z] = solve_linearized_state(problem.sys, y, e, problem.tol.lin);
  });

  Eigen::MatrixXd H(ell, ell);
  for (int z = 0; z < ell; ++z)
    for (int w = z; w < ell; ++w) {
      double gram = integrate_with<2>(
          *problem.sys.mesh, {&phi[z], &phi[w]},
          [](const Eigen::Vector3d&, const std::array<double, 2>& v) {
            return v[0] * v[1];
          });
      double curvature = integrate_with<4>(
          *problem.sys.mesh, {&y, &p, &phi[z], &phi[w]},
          [&](const Eigen::Vector3d& x, const std::array<double, 4>& v) {
            return v[1] * problem.sys.nl.a_yy(x, v[0]) * v[2] * v[3];
          });
      H(z, w) = gram - curvature + (z == w ? problem.alpha : 0.0);
      H(w, z) = H(z, w);
    }
  return H;
}

SoscReport check_sosc(const ReducedProblem& problem, const Eigen::VectorXd& u_bar,
                      double tau, double kappa_min, int threads) {
  SoscReport rep;
  rep.tau = tau;
  rep.kappa_min = kappa_min;
  Eigen::VectorXd psi = reduced_gradient(problem, u_bar);
  for (int z = 0; z < psi.size(); ++z)
    if (std::abs(psi(z)) <= tau) rep.critical_set.push_back(z);
  if (rep.critical_set.empty()) {
    rep.positive = true;  // C_tau = {0}
    return rep;
  }
  Eigen::MatrixXd H = reduced_hessian(problem, u_bar, threads);
  const int m = static_cast<int>(rep.critical_set.size());
  Eigen::MatrixXd Hc(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      Hc(i, j) = H(rep.critical_set[i], rep.critical_set[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Hc);
  rep.min_eigenvalue = eig.eigenvalues().minCoeff();
  rep.positive = *rep.min_eigenvalue >= kappa_min;
  return rep;
}

double variational_inequality_margin(const ReducedProblem& problem,
                                     const Eigen::VectorXd& u_bar,
                                     const Eigen::VectorXd& psi, int samples,
                                     unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd u(u_bar.size());
    for (int z = 0; z < u.size(); ++z)
      u(z) = problem.bounds.lower(z) +
             unit(rng) * (problem.bounds.upper(z) - problem.bounds.lower(z));
    double dist = (u - u_bar).norm();
    if (dist == 0.0) continue;
    worst = std::min(worst, psi.dot(u - u_bar) / dist);
  }
  return worst;
}

}  // namespace dirac_ocp
