#include <doctest.h>

#include <random>

#include "dirac_ocp/assembly.hpp"

using namespace dirac_ocp;

namespace {

MeshPtr square_mesh(int level) {
  Eigen::MatrixXd poly(4, 2);
  poly << 0, 0, 1, 0, 1, 1, 0, 1;
  MeshPtr mesh = triangulate_polygon(poly);
  for (int l = 0; l < level; ++l) mesh = refine_uniform(mesh);
  return mesh;
}

Eigen::MatrixXd dense(const SparseOperator& op) { return Eigen::MatrixXd(op); }

// Independent oracle for the basis-function integrals: for P1 on simplices,
// int phi_i = (1/(d+1)) * sum of the measures of the cells touching i.
Eigen::VectorXd basis_integrals(const TriMesh& mesh) {
  Eigen::VectorXd integral = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int c = 0; c < mesh.cell_count(); ++c)
    for (int k = 0; k < mesh.dim() + 1; ++k)
      integral(mesh.cells()(c, k)) += cell_measure(mesh, c) / (mesh.dim() + 1);
  return integral;
}

}  // namespace

TEST_CASE("element mass matrix of the reference triangle") {
  Eigen::MatrixXd tri(3, 2);
  tri << 0, 0, 1, 0, 0, 1;
  Eigen::MatrixXd M = element_mass(tri, constant_field(1.0));
  const double area = 0.5;
  Eigen::Matrix3d expected;
  expected << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  expected *= area / 12.0;
  CHECK((M - expected).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("stiffness on the structured square is the 5-point stencil") {
  MeshPtr mesh = square_mesh(2);
  SparseOperator K = assemble_stiffness(*mesh);
  REQUIRE(mesh->interior_count() == 9);
  const double spacing = 0.25;

  Eigen::MatrixXd Kd = dense(K);
  for (int i : mesh->interior_vertices()) {
    int row = mesh->interior_index(i);
    Eigen::Vector2d xi = mesh->vertices().row(i);
    for (int j : mesh->interior_vertices()) {
      int col = mesh->interior_index(j);
      double dist = (mesh->vertices().row(j).transpose() - xi).norm();
      double expected = 0.0;
      if (row == col)
        expected = 4.0;
      else if (std::abs(dist - spacing) < 1e-12)
        expected = -1.0;
      CHECK(std::abs(Kd(row, col) - expected) <= 1e-13);
    }
  }
}

TEST_CASE("single triangle has an empty interior system") {
  Eigen::MatrixXd tri(3, 2);
  tri << 0, 0, 1, 0, 0, 1;
  MeshPtr mesh = triangulate_polygon(tri);
  SparseOperator K = assemble_stiffness(*mesh);
  CHECK(K.rows() == 0);
}

TEST_CASE("stiffness symmetry and constant kernel") {
  MeshPtr mesh = square_mesh(3);
  SparseOperator K = assemble_stiffness(*mesh);
  SparseOperator Kt = SparseOperator(K.transpose());
  CHECK((dense(K) - dense(Kt)).cwiseAbs().maxCoeff() == 0.0);

  // Unconstrained stiffness annihilates constants.
  SparseOperator K_all = assemble_stiffness(*mesh, DofSet::all);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh->vertex_count());
  CHECK((K_all * ones).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("unweighted mass: partition of unity") {
  MeshPtr mesh = square_mesh(3);
  SparseOperator M = assemble_weighted_mass(*mesh, constant_field(1.0), DofSet::all);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh->vertex_count());
  Eigen::VectorXd row_sums = M * ones;
  Eigen::VectorXd expected = basis_integrals(*mesh);
  CHECK((row_sums - expected).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(row_sums.sum() == doctest::Approx(1.0).epsilon(1e-13));  // |Omega|
}

TEST_CASE("weighted mass: zero weight, PSD, monotonicity guard") {
  MeshPtr mesh = square_mesh(2);
  SparseOperator Z = assemble_weighted_mass(*mesh, constant_field(0.0));
  CHECK(dense(Z).cwiseAbs().maxCoeff() == 0.0);

  SparseOperator M = assemble_weighted_mass(
      *mesh, [](const Eigen::Vector3d& x) { return x.x() + 0.5; });
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(M.rows());
    for (int i = 0; i < x.size(); ++i) x(i) = gauss(rng);
    CHECK(x.dot(M * x) >= -1e-14);
  }

  CHECK_THROWS_AS(assemble_weighted_mass(*mesh, constant_field(-1.0)),
                  MonotonicityViolation);
}

TEST_CASE("semilinear residual reduces to mass action for a(x,y) = y") {
  MeshPtr mesh = square_mesh(3);
  Nonlinearity nl = make_nonlinearity("linear");
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd interior(mesh->interior_count());
  for (int i = 0; i < interior.size(); ++i) interior(i) = gauss(rng);
  FeFunction y = from_interior(mesh, interior);

  SparseOperator M = assemble_weighted_mass(*mesh, constant_field(1.0));
  Eigen::VectorXd residual = assemble_semilinear_residual(*mesh, y, nl);
  CHECK((residual - M * interior).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("semilinear residual for a constant field and a(x,y) = y^3") {
  MeshPtr mesh = square_mesh(2);
  Nonlinearity nl = make_nonlinearity("cubic");
  const double c = 1.7;
  FeFunction y = zero_function(mesh);
  y.values.setConstant(c);  // constant field, boundary trace irrelevant here

  Eigen::VectorXd residual = assemble_semilinear_residual(*mesh, y, nl);
  Eigen::VectorXd phi = basis_integrals(*mesh);
  for (int v : mesh->interior_vertices())
    CHECK(residual(mesh->interior_index(v)) ==
          doctest::Approx(c * c * c * phi(v)).epsilon(1e-13));

  Nonlinearity zero = make_nonlinearity("zero");
  CHECK(assemble_semilinear_residual(*mesh, y, zero).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dirac load vectors") {
  MeshPtr mesh = square_mesh(2);

  // Source at an interior mesh vertex: nodal basis interpolation.
  Eigen::MatrixXd at_vertex(1, 2);
  at_vertex << 0.5, 0.5;
  Eigen::VectorXd one(1);
  one << 1.0;
  Eigen::VectorXd load = dirac_load_vector(*mesh, at_vertex, one);
  int vertex = -1;
  for (int v : mesh->interior_vertices())
    if ((mesh->vertices().row(v) - at_vertex.row(0)).norm() < 1e-14) vertex = v;
  REQUIRE(vertex >= 0);
  CHECK(load(mesh->interior_index(vertex)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(load.sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(load.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-14));

  // Source strictly inside a cell whose vertices are all interior dofs:
  // three barycentric entries summing to 1.
  Eigen::MatrixXd inside(1, 2);
  inside << 0.45, 0.3;
  load = dirac_load_vector(*mesh, inside, one);
  int nonzeros = 0;
  for (int i = 0; i < load.size(); ++i)
    if (load(i) != 0.0) ++nonzeros;
  CHECK(nonzeros == 3);
  CHECK(load.sum() == doctest::Approx(1.0).epsilon(1e-14));

  // Linearity in u.
  Eigen::MatrixXd two_points(2, 2);
  two_points << 0.25, 0.75, 0.75, 0.25;
  DiracSources sources = locate_sources(*mesh, two_points);
  Eigen::VectorXd u1(2), u2(2);
  u1 << 2.0, -1.0;
  u2 << -0.5, 3.0;
  Eigen::VectorXd combined = dirac_load_vector(*mesh, sources, 2.0 * u1 - 3.0 * u2);
  Eigen::VectorXd split = 2.0 * dirac_load_vector(*mesh, sources, u1) -
                          3.0 * dirac_load_vector(*mesh, sources, u2);
  CHECK((combined - split).cwiseAbs().maxCoeff() <= 1e-14);

  // Sources must be strictly interior.
  Eigen::MatrixXd outside(1, 2);
  outside << 1.5, 0.5;
  CHECK_THROWS_AS(locate_sources(*mesh, outside), PointOutsideDomain);
  Eigen::MatrixXd on_boundary(1, 2);
  on_boundary << 0.0, 0.5;
  CHECK_THROWS_AS(locate_sources(*mesh, on_boundary), PointOutsideDomain);
}
