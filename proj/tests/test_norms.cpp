#include <doctest.h>

#include <random>

#include "dirac_ocp/norms.hpp"

using namespace dirac_ocp;

namespace {

MeshPtr square_mesh(int level, MeshPtr from = nullptr) {
  MeshPtr mesh = from;
  if (!mesh) {
    Eigen::MatrixXd poly(4, 2);
    poly << 0, 0, 1, 0, 1, 1, 0, 1;
    mesh = triangulate_polygon(poly);
  }
  while (mesh->level() < level) mesh = refine_uniform(mesh);
  return mesh;
}

FeFunction random_function(MeshPtr mesh, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd interior(mesh->interior_count());
  for (int i = 0; i < interior.size(); ++i) interior(i) = gauss(rng);
  return from_interior(std::move(mesh), interior);
}

}  // namespace

TEST_CASE("prolongation reproduces parent values and edge-midpoint averages") {
  MeshPtr coarse = square_mesh(2);
  MeshPtr fine = square_mesh(4, coarse);
  FeFunction f = random_function(coarse, 17);
  FeFunction g = prolongate_to(f, fine);

  // Parent vertices come first in the refined vertex numbering.
  for (int v = 0; v < coarse->vertex_count(); ++v)
    CHECK(g.values(v) == f.values(v));

  // One level up: midpoints are averages of their edge endpoints.
  MeshPtr mid = fine->parent();
  FeFunction gm = prolongate_to(f, mid);
  const auto& parents = mid->midpoint_parents();
  const int base = coarse->vertex_count();
  for (int k = 0; k < static_cast<int>(parents.size()); ++k)
    CHECK(gm.values(base + k) ==
          0.5 * (gm.values(parents[k][0]) + gm.values(parents[k][1])));

  // P1 evaluation of the coarse function agrees at every fine vertex.
  for (int v = 0; v < fine->vertex_count(); ++v) {
    Eigen::VectorXd x = fine->vertices().row(v).transpose();
    CHECK(g.values(v) == doctest::Approx(evaluate(f, x)).epsilon(1e-12));
  }
}

TEST_CASE("identical functions give zero errors") {
  MeshPtr coarse = square_mesh(1);
  MeshPtr fine = square_mesh(3, coarse);
  FeFunction f = random_function(coarse, 3);
  FeFunction g = prolongate_to(f, fine);
  ErrorNorms e = norm_errors(g, f);
  CHECK(e.l2 == 0.0);
  CHECK(e.l1 == 0.0);
  CHECK(e.linf == 0.0);
}

TEST_CASE("constant difference across nested meshes") {
  MeshPtr coarse = square_mesh(1);
  MeshPtr fine = square_mesh(3, coarse);
  FeFunction f = zero_function(fine);
  f.values.setConstant(1.0);
  FeFunction zero = zero_function(coarse);
  ErrorNorms e = norm_errors(f, zero);
  CHECK(e.l2 == doctest::Approx(1.0).epsilon(1e-13));   // sqrt(|Omega|)
  CHECK(e.l1 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(e.linf == doctest::Approx(1.0).epsilon(1e-14));

  Eigen::MatrixXd omega1(4, 2);
  omega1 << 0.25, 0.25, 0.75, 0.25, 0.75, 0.75, 0.25, 0.75;
  ErrorNorms e1 = norm_errors(f, zero, omega1);
  CHECK(e1.linf == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("l1 <= sqrt(|Omega|) l2 on random inputs") {
  MeshPtr coarse = square_mesh(1);
  MeshPtr fine = square_mesh(3, coarse);
  for (unsigned seed = 0; seed < 10; ++seed) {
    FeFunction f = random_function(fine, 100 + seed);
    FeFunction g = random_function(coarse, 200 + seed);
    ErrorNorms e = norm_errors(f, g);
    CHECK(e.l1 <= e.l2 * 1.0 + 1e-12);  // Cauchy-Schwarz with |Omega| = 1
    CHECK(e.linf >= e.l2 - 1e-12);      // P1 on the unit square
  }
}

TEST_CASE("non-nested meshes are rejected") {
  MeshPtr a = square_mesh(2);
  MeshPtr b = square_mesh(1);  // separately built root
  FeFunction f = random_function(b, 5);
  FeFunction g = random_function(a, 6);
  CHECK_THROWS_AS(norm_errors(g, f), MeshMismatch);
}

TEST_CASE("closed-form comparison tracks interpolation error") {
  ScalarField exact = [](const Eigen::Vector3d& x) {
    return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
  };
  double previous = std::numeric_limits<double>::max();
  MeshPtr mesh = square_mesh(2);
  for (int level : {2, 3, 4}) {
    mesh = square_mesh(level, mesh);
    FeFunction f = interpolate(mesh, exact);
    ErrorNorms e = norm_errors(f, exact);
    CHECK(e.l2 < previous / 3.0);  // roughly O(h^2)
    previous = e.l2;
  }
}
