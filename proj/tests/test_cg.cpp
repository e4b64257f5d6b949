#include <doctest.h>

#include <random>

#include "dirac_ocp/cg.hpp"

using namespace dirac_ocp;

namespace {

MeshPtr square_mesh(int level) {
  Eigen::MatrixXd poly(4, 2);
  poly << 0, 0, 1, 0, 1, 1, 0, 1;
  MeshPtr mesh = triangulate_polygon(poly);
  for (int l = 0; l < level; ++l) mesh = refine_uniform(mesh);
  return mesh;
}

}  // namespace

TEST_CASE("identity system returns the right-hand side") {
  SparseOperator I(5, 5);
  I.setIdentity();
  Eigen::VectorXd rhs(5);
  rhs << 1, -2, 3, 0.5, -0.25;
  CgReport report;
  Eigen::VectorXd x = solve_spd(I, rhs, {}, &report);
  CHECK((x - rhs).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(report.iterations <= 2);
}

TEST_CASE("CG agrees with a dense direct solve on the 3x3 interior grid") {
  MeshPtr mesh = square_mesh(2);
  SparseOperator K = assemble_stiffness(*mesh);
  REQUIRE(K.rows() == 9);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd rhs(9);
  for (int i = 0; i < 9; ++i) rhs(i) = gauss(rng);

  CgOptions opt;
  opt.tol = 1e-13;
  Eigen::VectorXd x = solve_spd(K, rhs, opt);

  Eigen::MatrixXd Kd(K);
  Eigen::VectorXd x_direct = Eigen::FullPivLU<Eigen::MatrixXd>(Kd).solve(rhs);
  CHECK((x - x_direct).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("residual contract on a Dirac-loaded Poisson system") {
  MeshPtr mesh = square_mesh(4);
  SparseOperator K = assemble_stiffness(*mesh);
  Eigen::MatrixXd point(1, 2);
  point << 0.5, 0.5;
  Eigen::VectorXd amplitude(1);
  amplitude << 4.0;
  Eigen::VectorXd rhs = dirac_load_vector(*mesh, point, amplitude);

  CgOptions opt;
  opt.tol = 1e-12;
  Eigen::VectorXd x = solve_spd(K, rhs, opt);
  CHECK((K * x - rhs).norm() <= opt.tol * rhs.norm());

  // Warm starts keep the contract.
  CgOptions warm = opt;
  warm.initial_guess = &x;
  CgReport report;
  Eigen::VectorXd x2 = solve_spd(K, rhs, warm, &report);
  CHECK((K * x2 - rhs).norm() <= opt.tol * rhs.norm());
  CHECK(report.iterations <= 2);
}

TEST_CASE("iteration budget exhaustion raises LinearSolveFailure") {
  MeshPtr mesh = square_mesh(4);
  SparseOperator K = assemble_stiffness(*mesh);
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(K.rows());
  CgOptions opt;
  opt.tol = 1e-14;
  opt.max_iter = 2;
  CHECK_THROWS_AS(solve_spd(K, rhs, opt), LinearSolveFailure);
}

TEST_CASE("non-SPD operators are rejected") {
  SparseOperator A(3, 3);
  A.setIdentity();
  A *= -1.0;
  Eigen::VectorXd rhs(3);
  rhs << 1, 1, 1;
  CHECK_THROWS_AS(solve_spd(A, rhs), LinearSolveFailure);
}
