#include <doctest.h>

#include <map>
#include <random>
#include <vector>

#include "dirac_ocp/mesh.hpp"

using namespace dirac_ocp;

namespace {

Eigen::MatrixXd unit_square() {
  Eigen::MatrixXd poly(4, 2);
  poly << 0, 0, 1, 0, 1, 1, 0, 1;
  return poly;
}

MeshPtr square_mesh(int level) {
  MeshPtr mesh = triangulate_polygon(unit_square());
  for (int l = 0; l < level; ++l) mesh = refine_uniform(mesh);
  return mesh;
}

// Conformity: every facet is shared by at most two cells, and the facet
// counts match a closed surface (1 = boundary, 2 = interior).
bool conforming(const TriMesh& mesh) {
  std::map<std::vector<int>, int> facet_count;
  const int nv = mesh.dim() + 1;
  for (int c = 0; c < mesh.cell_count(); ++c)
    for (int skip = 0; skip < nv; ++skip) {
      std::vector<int> f;
      for (int k = 0; k < nv; ++k)
        if (k != skip) f.push_back(mesh.cells()(c, k));
      std::sort(f.begin(), f.end());
      ++facet_count[f];
    }
  for (const auto& [f, count] : facet_count)
    if (count > 2) return false;
  // Every cell must have positive measure.
  for (int c = 0; c < mesh.cell_count(); ++c)
    if (!(cell_measure(mesh, c) > 0)) return false;
  return true;
}

double quasi_uniformity_ratio(const TriMesh& mesh) {
  double hmin = std::numeric_limits<double>::max(), hmax = 0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    hmin = std::min(hmin, cell_diameter(mesh, c));
    hmax = std::max(hmax, cell_diameter(mesh, c));
  }
  return hmax / hmin;
}

}  // namespace

TEST_CASE("fan triangulation of the unit square") {
  MeshPtr mesh = square_mesh(0);
  CHECK(mesh->cell_count() == 2);
  CHECK(mesh->vertex_count() == 4);
  CHECK(mesh->h() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(mesh->level() == 0);
  for (int v = 0; v < 4; ++v) CHECK(mesh->boundary_vertex()[v]);
  CHECK(mesh->interior_count() == 0);
}

TEST_CASE("single-triangle polygon") {
  Eigen::MatrixXd tri(3, 2);
  tri << 0, 0, 1, 0, 0, 1;
  MeshPtr mesh = triangulate_polygon(tri);
  CHECK(mesh->cell_count() == 1);
  CHECK(mesh->h() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("polygon validation") {
  Eigen::MatrixXd repeated(5, 2);
  repeated << 0, 0, 1, 0, 1, 0, 1, 1, 0, 1;
  CHECK_THROWS_AS(triangulate_polygon(repeated), InvalidPolygon);

  Eigen::MatrixXd nonconvex(4, 2);
  nonconvex << 0, 0, 1, 0, 0.1, 0.1, 0, 1;
  CHECK_THROWS_AS(triangulate_polygon(nonconvex), InvalidPolygon);

  Eigen::MatrixXd clockwise(4, 2);
  clockwise << 0, 0, 0, 1, 1, 1, 1, 0;
  CHECK_THROWS_AS(triangulate_polygon(clockwise), InvalidPolygon);

  Eigen::MatrixXd two(2, 2);
  two << 0, 0, 1, 0;
  CHECK_THROWS_AS(triangulate_polygon(two), InvalidPolygon);
}

TEST_CASE("red refinement counts and h halving") {
  MeshPtr mesh = square_mesh(0);
  MeshPtr fine = refine_uniform(mesh);
  CHECK(fine->cell_count() == 8);
  CHECK(fine->vertex_count() == 9);
  CHECK(fine->level() == 1);
  CHECK(fine->h() == doctest::Approx(mesh->h() / 2).epsilon(1e-14));

  MeshPtr finer = refine_uniform(fine);
  CHECK(finer->cell_count() == 32);
  CHECK(finer->level() == 2);
  CHECK(finer->parent().get() == fine.get());
}

TEST_CASE("mesh statistics on the square family") {
  for (int level : {0, 1, 3}) {
    MeshPtr mesh = square_mesh(level);
    MeshStatistics s = mesh_statistics(*mesh);
    CHECK(s.min_angle_deg == doctest::Approx(45.0).epsilon(1e-12));
    CHECK(s.cell_count == 2 * (1 << (2 * level)));
    CHECK(s.h == doctest::Approx(std::sqrt(2.0) / (1 << level)).epsilon(1e-13));
    int n = (1 << level) + 1;
    CHECK(s.vertex_count == n * n);
  }
}

TEST_CASE("refinement preserves conformity, angles and quasi-uniformity") {
  MeshPtr mesh = square_mesh(0);
  const double ratio0 = quasi_uniformity_ratio(*mesh);
  for (int l = 0; l < 4; ++l) {
    CHECK(conforming(*mesh));
    CHECK(mesh_statistics(*mesh).min_angle_deg == doctest::Approx(45.0));
    CHECK(quasi_uniformity_ratio(*mesh) == doctest::Approx(ratio0).epsilon(1e-12));
    mesh = refine_uniform(mesh);
  }
}

TEST_CASE("locate_point barycentric cases from the square mesh") {
  MeshPtr mesh = square_mesh(0);  // diagonal (0,0)-(1,1)
  Eigen::Vector2d z(0.5, 0.25);
  PointLocation loc = locate_point(*mesh, z);
  CHECK(loc.cell == 0);
  CHECK(loc.barycentric(0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(loc.barycentric(1) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(loc.barycentric(2) == doctest::Approx(0.25).epsilon(1e-13));

  // Vertex query: unit barycentric weight at that vertex.
  Eigen::Vector2d corner(1.0, 1.0);
  PointLocation vloc = locate_point(*mesh, corner);
  int local = -1;
  for (int k = 0; k < 3; ++k)
    if (mesh->cells()(vloc.cell, k) == 2) local = k;
  REQUIRE(local >= 0);
  CHECK(vloc.barycentric(local) == doctest::Approx(1.0).epsilon(1e-13));

  Eigen::Vector2d outside(2.0, 2.0);
  CHECK_THROWS_AS(locate_point(*mesh, outside), PointOutsideDomain);
}

TEST_CASE("locate_point reconstruction on random interior points") {
  MeshPtr mesh = square_mesh(3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.001, 0.999);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::Vector2d z(unit(rng), unit(rng));
    PointLocation loc = locate_point(*mesh, z);
    CHECK(loc.barycentric.head(3).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(loc.barycentric.head(3).minCoeff() >= -kGeomTol);
    Eigen::Vector2d rec = Eigen::Vector2d::Zero();
    for (int k = 0; k < 3; ++k)
      rec += loc.barycentric(k) *
             mesh->vertices().row(mesh->cells()(loc.cell, k)).transpose();
    CHECK((rec - z).norm() <= 1e-12);
  }
}

TEST_CASE("pentagon fan stays conforming under refinement") {
  Eigen::MatrixXd pent(5, 2);
  for (int k = 0; k < 5; ++k) {
    double t = 2 * M_PI * k / 5;
    pent.row(k) << std::cos(t), std::sin(t);
  }
  MeshPtr mesh = triangulate_polygon(pent);
  CHECK(mesh->cell_count() == 3);
  mesh = refine_uniform(refine_uniform(mesh));
  CHECK(conforming(*mesh));
  CHECK(mesh->cell_count() == 3 * 16);
}

TEST_CASE("3D box mesh: Kuhn subdivision and Bey refinement") {
  MeshPtr box = box_mesh_3d(Eigen::Vector3d::Zero(), Eigen::Vector3d::Ones());
  CHECK(box->cell_count() == 6);
  CHECK(box->vertex_count() == 8);
  CHECK(box->h() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(conforming(*box));
  // Cells tile the cube exactly.
  double vol = 0;
  for (int c = 0; c < box->cell_count(); ++c) vol += cell_measure(*box, c);
  CHECK(vol == doctest::Approx(1.0).epsilon(1e-14));

  MeshPtr fine = refine_uniform(box);
  CHECK(fine->cell_count() == 48);
  CHECK(fine->h() == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-14));
  CHECK(conforming(*fine));
  double vol1 = 0;
  for (int c = 0; c < fine->cell_count(); ++c) vol1 += cell_measure(*fine, c);
  CHECK(vol1 == doctest::Approx(1.0).epsilon(1e-14));

  MeshPtr finer = refine_uniform(fine);
  CHECK(conforming(*finer));
  CHECK(quasi_uniformity_ratio(*finer) ==
        doctest::Approx(quasi_uniformity_ratio(*fine)).epsilon(1e-12));

  // Interior vertex count of the (2^k+1)^3 grid.
  CHECK(finer->vertex_count() == 5 * 5 * 5);
  CHECK(finer->interior_count() == 3 * 3 * 3);

  // Locate via lineage descent.
  Eigen::Vector3d z(0.3, 0.4, 0.55);
  PointLocation loc = locate_point(*finer, z);
  Eigen::Vector3d rec = Eigen::Vector3d::Zero();
  for (int k = 0; k < 4; ++k)
    rec += loc.barycentric(k) *
           finer->vertices().row(finer->cells()(loc.cell, k)).transpose();
  CHECK((rec - z).norm() <= 1e-12);
}

TEST_CASE("strict interiority test") {
  MeshPtr mesh = square_mesh(1);
  CHECK(strictly_inside_domain(*mesh, Eigen::Vector2d(0.5, 0.5)));
  CHECK(!strictly_inside_domain(*mesh, Eigen::Vector2d(0.0, 0.5)));
  CHECK(!strictly_inside_domain(*mesh, Eigen::Vector2d(1.5, 0.5)));
}
