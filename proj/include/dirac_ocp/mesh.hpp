// Conforming simplicial meshes of convex polytopes with uniform (red)
// refinement lineage. Meshes are immutable after construction and shared
// via MeshPtr, so they are safe to use from several threads at once.
//
// Supported domains: arbitrary strictly convex polygons in 2D (fan
// triangulation from vertex 0), axis-aligned boxes in 3D (Kuhn split into
// six tetrahedra). refine_uniform splits every cell into 4 (2D) resp. 8 (3D)
// children through edge midpoints; children of cell c occupy the index range
// [4c, 4c+4) resp. [8c, 8c+8) in the refined mesh.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

#include "dirac_ocp/errors.hpp"

namespace dirac_ocp {

// Absolute tolerance for point-location membership tests.
inline constexpr double kGeomTol = 1e-10;

class TriMesh;
using MeshPtr = std::shared_ptr<const TriMesh>;

struct PointLocation {
  int cell = -1;
  // barycentric coordinates w.r.t. the cell's vertex order; entries past
  // dim+1 are zero.
  Eigen::Vector4d barycentric = Eigen::Vector4d::Zero();
};

struct MeshStatistics {
  double h = 0.0;
  double min_angle_deg = 0.0;  // 2D: corner angles; 3D: face corner angles
  int cell_count = 0;
  int vertex_count = 0;
};

class TriMesh {
public:
  TriMesh(int dim, Eigen::MatrixXd vertices, Eigen::MatrixXi cells, int level,
          MeshPtr parent, std::vector<std::array<int, 2>> midpoint_parents,
          Eigen::MatrixXd domain);

  int dim() const { return dim_; }
  int vertex_count() const { return static_cast<int>(vertices_.rows()); }
  int cell_count() const { return static_cast<int>(cells_.rows()); }
  const Eigen::MatrixXd& vertices() const { return vertices_; }
  const Eigen::MatrixXi& cells() const { return cells_; }
  const std::vector<char>& boundary_vertex() const { return boundary_; }
  int level() const { return level_; }
  double h() const { return h_; }
  const MeshPtr& parent() const { return parent_; }

  // Domain description: polygon vertices (ccw) for 2D, rows {lo, hi} for 3D.
  const Eigen::MatrixXd& domain() const { return domain_; }

  // Vertices created by the refinement that produced this mesh, as midpoints
  // of parent-vertex pairs; vertex parent_vertex_count()+k has
  // midpoint_parents()[k]. Empty for level-0 meshes.
  const std::vector<std::array<int, 2>>& midpoint_parents() const {
    return midpoint_parents_;
  }

  // Interior (non-Dirichlet) degrees of freedom, in vertex order.
  int interior_count() const { return static_cast<int>(interior_vertices_.size()); }
  int interior_index(int vertex) const { return interior_index_[vertex]; }
  const std::vector<int>& interior_vertices() const { return interior_vertices_; }

  Eigen::Vector3d vertex3(int v) const {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    p.head(dim_) = vertices_.row(v).transpose();
    return p;
  }

private:
  int dim_;
  Eigen::MatrixXd vertices_;
  Eigen::MatrixXi cells_;
  std::vector<char> boundary_;
  int level_;
  double h_;
  MeshPtr parent_;
  std::vector<std::array<int, 2>> midpoint_parents_;
  Eigen::MatrixXd domain_;
  std::vector<int> interior_index_;
  std::vector<int> interior_vertices_;
};

// Level-0 fan triangulation of a strictly convex ccw polygon.
// Throws InvalidPolygon for fewer than 3, repeated, collinear, non-convex or
// clockwise vertices.
MeshPtr triangulate_polygon(const Eigen::MatrixXd& vertices_ccw);

// Level-0 Kuhn triangulation (6 tetrahedra) of the box [lo, hi].
MeshPtr box_mesh_3d(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi);

// Red refinement through edge midpoints; level + 1, h / 2.
MeshPtr refine_uniform(const MeshPtr& mesh);

// Containing cell plus barycentric coordinates. Points on shared faces may
// be reported against any containing cell (deterministically the first in
// cell order). Throws PointOutsideDomain.
PointLocation locate_point(const TriMesh& mesh, const Eigen::VectorXd& z);

// Barycentric coordinates of z w.r.t. cell c (no membership check).
Eigen::Vector4d barycentric_in_cell(const TriMesh& mesh, int c,
                                    const Eigen::VectorXd& z);

double cell_measure(const TriMesh& mesh, int c);
double cell_diameter(const TriMesh& mesh, int c);

MeshStatistics mesh_statistics(const TriMesh& mesh);

// Closed membership test for a convex ccw polygon, with tolerance `tol` in
// units of length (scaled internally by edge length).
bool point_in_convex_polygon(const Eigen::MatrixXd& polygon_ccw, double x,
                             double y, double tol = kGeomTol);

// Strict interiority with positive margin (used to validate source points).
bool strictly_inside_domain(const TriMesh& mesh, const Eigen::VectorXd& z,
                            double margin = kGeomTol);

}  // namespace dirac_ocp
