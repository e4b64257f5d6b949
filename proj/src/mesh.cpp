#include "dirac_ocp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace dirac_ocp {

namespace {

// Boundary detection: a facet ((d-1)-simplex) shared by exactly one cell is
// a boundary facet; all its vertices are boundary vertices.
std::vector<char> detect_boundary(int dim, int n_vertices,
                                  const Eigen::MatrixXi& cells) {
  std::vector<char> boundary(n_vertices, 0);
  if (dim == 2) {
    std::unordered_map<std::uint64_t, int> edge_count;
    auto key = [](int a, int b) {
      if (a > b) std::swap(a, b);
      return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    };
    for (int c = 0; c < cells.rows(); ++c)
      for (int e = 0; e < 3; ++e)
        ++edge_count[key(cells(c, e), cells(c, (e + 1) % 3))];
    for (int c = 0; c < cells.rows(); ++c)
      for (int e = 0; e < 3; ++e) {
        int a = cells(c, e), b = cells(c, (e + 1) % 3);
        if (edge_count[key(a, b)] == 1) boundary[a] = boundary[b] = 1;
      }
  } else {
    std::map<std::array<int, 3>, int> face_count;
    auto face = [&](int c, int skip) {
      std::array<int, 3> f;
      int k = 0;
      for (int i = 0; i < 4; ++i)
        if (i != skip) f[k++] = cells(c, i);
      std::sort(f.begin(), f.end());
      return f;
    };
    for (int c = 0; c < cells.rows(); ++c)
      for (int s = 0; s < 4; ++s) ++face_count[face(c, s)];
    for (const auto& [f, count] : face_count)
      if (count == 1)
        for (int v : f) boundary[v] = 1;
  }
  return boundary;
}

double max_diameter(int dim, const Eigen::MatrixXd& vertices,
                    const Eigen::MatrixXi& cells) {
  double h = 0.0;
  const int nv = dim + 1;
  for (int c = 0; c < cells.rows(); ++c)
    for (int i = 0; i < nv; ++i)
      for (int j = i + 1; j < nv; ++j) {
        double d = (vertices.row(cells(c, i)) - vertices.row(cells(c, j))).norm();
        h = std::max(h, d);
      }
  return h;
}

}  // namespace

TriMesh::TriMesh(int dim, Eigen::MatrixXd vertices, Eigen::MatrixXi cells,
                 int level, MeshPtr parent,
                 std::vector<std::array<int, 2>> midpoint_parents,
                 Eigen::MatrixXd domain)
    : dim_(dim),
      vertices_(std::move(vertices)),
      cells_(std::move(cells)),
      level_(level),
      parent_(std::move(parent)),
      midpoint_parents_(std::move(midpoint_parents)),
      domain_(std::move(domain)) {
  boundary_ = detect_boundary(dim_, vertex_count(), cells_);
  h_ = max_diameter(dim_, vertices_, cells_);
  interior_index_.assign(vertex_count(), -1);
  for (int v = 0; v < vertex_count(); ++v)
    if (!boundary_[v]) {
      interior_index_[v] = static_cast<int>(interior_vertices_.size());
      interior_vertices_.push_back(v);
    }
}

MeshPtr triangulate_polygon(const Eigen::MatrixXd& vertices_ccw) {
  const int n = static_cast<int>(vertices_ccw.rows());
  if (n < 3 || vertices_ccw.cols() != 2)
    throw InvalidPolygon("polygon needs at least 3 two-dimensional vertices");
  // Strict convexity and ccw orientation: every consecutive cross product
  // must be positive. Repeated vertices collapse an edge and fail here too.
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d a = vertices_ccw.row(i);
    Eigen::Vector2d b = vertices_ccw.row((i + 1) % n);
    Eigen::Vector2d c = vertices_ccw.row((i + 2) % n);
    Eigen::Vector2d e1 = b - a, e2 = c - b;
    double cross = e1.x() * e2.y() - e1.y() * e2.x();
    if (!(cross > kGeomTol * std::max(1.0, e1.norm() * e2.norm())))
      throw InvalidPolygon("polygon must be strictly convex, counter-clockwise, "
                           "without repeated vertices (violation at vertex " +
                           std::to_string((i + 1) % n) + ")");
  }
  Eigen::MatrixXi cells(n - 2, 3);
  for (int i = 0; i < n - 2; ++i) cells.row(i) << 0, i + 1, i + 2;
  return std::make_shared<TriMesh>(2, vertices_ccw, cells, 0, nullptr,
                                   std::vector<std::array<int, 2>>{},
                                   vertices_ccw);
}

MeshPtr box_mesh_3d(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  if (!((hi - lo).minCoeff() > 0))
    throw InvalidPolygon("box must have positive extent in every direction");
  Eigen::MatrixXd vertices(8, 3);
  for (int k = 0; k < 8; ++k)
    vertices.row(k) << (k & 1 ? hi.x() : lo.x()), (k & 2 ? hi.y() : lo.y()),
        (k & 4 ? hi.z() : lo.z());
  // Kuhn subdivision: six tetrahedra around the main diagonal 0-7, each in
  // coordinate path order lo -> lo+e_p1 -> lo+e_p1+e_p2 -> hi. Path order
  // makes Bey's refinement reproduce the Kuhn grid of the halved box, so h
  // halves exactly under refine_uniform.
  Eigen::MatrixXi cells(6, 4);
  cells << 0, 1, 3, 7,
           0, 1, 5, 7,
           0, 2, 3, 7,
           0, 2, 6, 7,
           0, 4, 5, 7,
           0, 4, 6, 7;
  Eigen::MatrixXd domain(2, 3);
  domain.row(0) = lo.transpose();
  domain.row(1) = hi.transpose();
  return std::make_shared<TriMesh>(3, std::move(vertices), std::move(cells), 0,
                                   nullptr, std::vector<std::array<int, 2>>{},
                                   std::move(domain));
}

MeshPtr refine_uniform(const MeshPtr& mesh) {
  const TriMesh& m = *mesh;
  const int dim = m.dim();
  const int old_nv = m.vertex_count();

  std::unordered_map<std::uint64_t, int> midpoint;
  std::vector<std::array<int, 2>> midpoint_parents;
  std::vector<Eigen::VectorXd> new_coords;
  auto mid = [&](int a, int b) {
    int lo = std::min(a, b), hi = std::max(a, b);
    std::uint64_t key =
        (static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint32_t>(hi);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int idx = old_nv + static_cast<int>(midpoint_parents.size());
    midpoint.emplace(key, idx);
    midpoint_parents.push_back({lo, hi});
    new_coords.push_back(0.5 * (m.vertices().row(lo) + m.vertices().row(hi)));
    return idx;
  };

  Eigen::MatrixXi cells(m.cell_count() * (dim == 2 ? 4 : 8), dim + 1);
  int row = 0;
  for (int c = 0; c < m.cell_count(); ++c) {
    if (dim == 2) {
      int v0 = m.cells()(c, 0), v1 = m.cells()(c, 1), v2 = m.cells()(c, 2);
      int m01 = mid(v0, v1), m12 = mid(v1, v2), m02 = mid(v0, v2);
      cells.row(row++) << v0, m01, m02;
      cells.row(row++) << m01, v1, m12;
      cells.row(row++) << m02, m12, v2;
      cells.row(row++) << m01, m12, m02;
    } else {
      int v0 = m.cells()(c, 0), v1 = m.cells()(c, 1), v2 = m.cells()(c, 2),
          v3 = m.cells()(c, 3);
      int m01 = mid(v0, v1), m02 = mid(v0, v2), m03 = mid(v0, v3);
      int m12 = mid(v1, v2), m13 = mid(v1, v3), m23 = mid(v2, v3);
      // Bey's red refinement: four corner children plus the inner octahedron
      // split along the m02-m13 diagonal.
      cells.row(row++) << v0, m01, m02, m03;
      cells.row(row++) << m01, v1, m12, m13;
      cells.row(row++) << m02, m12, v2, m23;
      cells.row(row++) << m03, m13, m23, v3;
      cells.row(row++) << m01, m02, m03, m13;
      cells.row(row++) << m01, m02, m12, m13;
      cells.row(row++) << m02, m03, m13, m23;
      cells.row(row++) << m02, m12, m13, m23;
    }
  }

  Eigen::MatrixXd vertices(old_nv + static_cast<int>(new_coords.size()), dim);
  vertices.topRows(old_nv) = m.vertices();
  for (int k = 0; k < static_cast<int>(new_coords.size()); ++k)
    vertices.row(old_nv + k) = new_coords[k].transpose();

  return std::make_shared<TriMesh>(dim, std::move(vertices), std::move(cells),
                                   m.level() + 1, mesh,
                                   std::move(midpoint_parents), m.domain());
}

Eigen::Vector4d barycentric_in_cell(const TriMesh& mesh, int c,
                                    const Eigen::VectorXd& z) {
  Eigen::Vector4d lambda = Eigen::Vector4d::Zero();
  const auto& V = mesh.vertices();
  const auto& cells = mesh.cells();
  if (mesh.dim() == 2) {
    Eigen::Vector2d v0 = V.row(cells(c, 0));
    Eigen::Matrix2d T;
    T.col(0) = V.row(cells(c, 1)).transpose() - v0;
    T.col(1) = V.row(cells(c, 2)).transpose() - v0;
    Eigen::Vector2d rhs = z.head<2>() - v0;
    Eigen::Vector2d l = T.inverse() * rhs;
    lambda << 1.0 - l.sum(), l(0), l(1), 0.0;
  } else {
    Eigen::Vector3d v0 = V.row(cells(c, 0));
    Eigen::Matrix3d T;
    for (int k = 0; k < 3; ++k)
      T.col(k) = V.row(cells(c, k + 1)).transpose() - v0;
    Eigen::Vector3d rhs = z.head<3>() - v0;
    Eigen::Vector3d l = T.inverse() * rhs;
    lambda << 1.0 - l.sum(), l(0), l(1), l(2);
  }
  return lambda;
}

namespace {

PointLocation scan_cells(const TriMesh& mesh, const Eigen::VectorXd& z, int begin,
                         int end) {
  for (int c = begin; c < end; ++c) {
    Eigen::Vector4d lambda = barycentric_in_cell(mesh, c, z);
    if (lambda.head(mesh.dim() + 1).minCoeff() >= -kGeomTol)
      return PointLocation{c, lambda};
  }
  return PointLocation{};
}

}  // namespace

PointLocation locate_point(const TriMesh& mesh, const Eigen::VectorXd& z) {
  if (mesh.parent()) {
    // Descend the refinement lineage: the point lies in one of the children
    // of its containing parent cell.
    PointLocation up = locate_point(*mesh.parent(), z);
    const int fan = mesh.dim() == 2 ? 4 : 8;
    PointLocation loc = scan_cells(mesh, z, fan * up.cell, fan * up.cell + fan);
    if (loc.cell >= 0) return loc;
    // Tolerance edge case near a parent-cell facet: fall through to a scan.
  }
  PointLocation loc = scan_cells(mesh, z, 0, mesh.cell_count());
  if (loc.cell < 0)
    throw PointOutsideDomain("point is outside the meshed domain");
  return loc;
}

double cell_measure(const TriMesh& mesh, int c) {
  const auto& V = mesh.vertices();
  const auto& cells = mesh.cells();
  if (mesh.dim() == 2) {
    Eigen::Vector2d a = V.row(cells(c, 1)) - V.row(cells(c, 0));
    Eigen::Vector2d b = V.row(cells(c, 2)) - V.row(cells(c, 0));
    return 0.5 * std::abs(a.x() * b.y() - a.y() * b.x());
  }
  Eigen::Matrix3d T;
  for (int k = 0; k < 3; ++k)
    T.col(k) = (V.row(cells(c, k + 1)) - V.row(cells(c, 0))).transpose();
  return std::abs(T.determinant()) / 6.0;
}

double cell_diameter(const TriMesh& mesh, int c) {
  const int nv = mesh.dim() + 1;
  double d = 0.0;
  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j)
      d = std::max(d, (mesh.vertices().row(mesh.cells()(c, i)) -
                       mesh.vertices().row(mesh.cells()(c, j)))
                          .norm());
  return d;
}

MeshStatistics mesh_statistics(const TriMesh& mesh) {
  MeshStatistics s;
  s.h = mesh.h();
  s.cell_count = mesh.cell_count();
  s.vertex_count = mesh.vertex_count();
  double min_angle = std::numeric_limits<double>::max();
  auto corner_angles = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                           const Eigen::Vector3d& c) {
    Eigen::Vector3d u = b - a, v = c - a;
    double cosang = u.dot(v) / (u.norm() * v.norm());
    min_angle = std::min(min_angle, std::acos(std::clamp(cosang, -1.0, 1.0)));
  };
  for (int c = 0; c < mesh.cell_count(); ++c) {
    if (mesh.dim() == 2) {
      Eigen::Vector3d p[3];
      for (int k = 0; k < 3; ++k) p[k] = mesh.vertex3(mesh.cells()(c, k));
      for (int k = 0; k < 3; ++k)
        corner_angles(p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
    } else {
      // Face corner angles of the four triangular faces.
      Eigen::Vector3d p[4];
      for (int k = 0; k < 4; ++k) p[k] = mesh.vertex3(mesh.cells()(c, k));
      static const int faces[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
      for (const auto& f : faces)
        for (int k = 0; k < 3; ++k)
          corner_angles(p[f[k]], p[f[(k + 1) % 3]], p[f[(k + 2) % 3]]);
    }
  }
  s.min_angle_deg = min_angle * 180.0 / M_PI;
  return s;
}

bool point_in_convex_polygon(const Eigen::MatrixXd& polygon_ccw, double x,
                             double y, double tol) {
  const int n = static_cast<int>(polygon_ccw.rows());
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d a = polygon_ccw.row(i);
    Eigen::Vector2d b = polygon_ccw.row((i + 1) % n);
    Eigen::Vector2d e = b - a;
    double cross = e.x() * (y - a.y()) - e.y() * (x - a.x());
    if (cross < -tol * std::max(1.0, e.norm())) return false;
  }
  return true;
}

bool strictly_inside_domain(const TriMesh& mesh, const Eigen::VectorXd& z,
                            double margin) {
  if (mesh.dim() == 2) {
    const auto& poly = mesh.domain();
    const int n = static_cast<int>(poly.rows());
    for (int i = 0; i < n; ++i) {
      Eigen::Vector2d a = poly.row(i);
      Eigen::Vector2d b = poly.row((i + 1) % n);
      Eigen::Vector2d e = b - a;
      double cross = e.x() * (z(1) - a.y()) - e.y() * (z(0) - a.x());
      if (!(cross > margin * std::max(1.0, e.norm()))) return false;
    }
    return true;
  }
  Eigen::Vector3d lo = mesh.domain().row(0), hi = mesh.domain().row(1);
  for (int k = 0; k < 3; ++k)
    if (!(z(k) > lo(k) + margin && z(k) < hi(k) - margin)) return false;
  return true;
}

}  // namespace dirac_ocp
