#include "dirac_ocp/assembly.hpp"

#include <cmath>

namespace dirac_ocp {

namespace {

// Constant P1 gradients on a cell, as rows of G ((dim+1) x dim).
Eigen::MatrixXd p1_gradients(const TriMesh& mesh, int c) {
  const int d = mesh.dim();
  const auto& V = mesh.vertices();
  const auto& cells = mesh.cells();
  Eigen::MatrixXd E(d, d);
  for (int k = 0; k < d; ++k)
    E.col(k) = (V.row(cells(c, k + 1)) - V.row(cells(c, 0))).transpose();
  Eigen::MatrixXd Einv = E.inverse();
  Eigen::MatrixXd G(d + 1, d);
  G.bottomRows(d) = Einv;
  G.row(0) = -Einv.colwise().sum();
  return G;
}

using WeightAt =
    std::function<double(int cell, const Eigen::Vector3d&, const Eigen::Vector4d&)>;

SparseOperator assemble_mass_kernel(const TriMesh& mesh, const WeightAt& weight,
                                    DofSet dofs) {
  const QuadratureRule& rule = default_rule(mesh.dim());
  const double ref = reference_measure(mesh.dim());
  const int nv = mesh.dim() + 1;
  const int n = dofs == DofSet::all ? mesh.vertex_count() : mesh.interior_count();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.cell_count()) * nv * nv);
  for (int c = 0; c < mesh.cell_count(); ++c) {
    auto cq = detail::cell_quad(mesh, c);
    const double scale = cq.measure / ref;
    Eigen::Matrix4d local = Eigen::Matrix4d::Zero();
    for (int q = 0; q < rule.weights.size(); ++q) {
      Eigen::Vector4d lambda = Eigen::Vector4d::Zero();
      lambda.head(nv) = rule.barycentric.row(q).transpose();
      Eigen::Vector3d x = Eigen::Vector3d::Zero();
      for (int k = 0; k < nv; ++k) x += lambda(k) * cq.vertex[k];
      const double w = weight(c, x, lambda);
      if (w < 0.0)
        throw MonotonicityViolation(
            "negative weight at a quadrature point: the nonlinearity violates "
            "monotonicity (a_y >= 0)");
      local += (rule.weights(q) * w) * lambda * lambda.transpose();
    }
    for (int i = 0; i < nv; ++i) {
      int di = detail::dof_of(mesh, mesh.cells()(c, i), dofs);
      if (di < 0) continue;
      for (int j = 0; j < nv; ++j) {
        int dj = detail::dof_of(mesh, mesh.cells()(c, j), dofs);
        if (dj >= 0) triplets.emplace_back(di, dj, scale * local(i, j));
      }
    }
  }
  SparseOperator op(n, n);
  op.setFromTriplets(triplets.begin(), triplets.end());
  op.makeCompressed();
  return op;
}

}  // namespace

SparseOperator assemble_stiffness(const TriMesh& mesh, DofSet dofs) {
  const int nv = mesh.dim() + 1;
  const int n = dofs == DofSet::all ? mesh.vertex_count() : mesh.interior_count();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.cell_count()) * nv * nv);
  for (int c = 0; c < mesh.cell_count(); ++c) {
    Eigen::MatrixXd G = p1_gradients(mesh, c);
    const double measure = cell_measure(mesh, c);
    for (int i = 0; i < nv; ++i) {
      int di = detail::dof_of(mesh, mesh.cells()(c, i), dofs);
      if (di < 0) continue;
      for (int j = 0; j < nv; ++j) {
        int dj = detail::dof_of(mesh, mesh.cells()(c, j), dofs);
        if (dj >= 0)
          triplets.emplace_back(di, dj, measure * G.row(i).dot(G.row(j)));
      }
    }
  }
  SparseOperator op(n, n);
  op.setFromTriplets(triplets.begin(), triplets.end());
  op.makeCompressed();
  return op;
}

SparseOperator assemble_weighted_mass(const TriMesh& mesh, const ScalarField& w,
                                      DofSet dofs) {
  return assemble_mass_kernel(
      mesh,
      [&](int, const Eigen::Vector3d& x, const Eigen::Vector4d&) { return w(x); },
      dofs);
}

SparseOperator assemble_weighted_mass(
    const TriMesh& mesh,
    const std::function<double(const Eigen::Vector3d&, double)>& g,
    const FeFunction& y, DofSet dofs) {
  const auto& cells = mesh.cells();
  const int nv = mesh.dim() + 1;
  return assemble_mass_kernel(
      mesh,
      [&](int cell, const Eigen::Vector3d& x, const Eigen::Vector4d& lambda) {
        double yval = 0.0;
        for (int k = 0; k < nv; ++k) yval += lambda(k) * y.values(cells(cell, k));
        return g(x, yval);
      },
      dofs);
}

Eigen::VectorXd assemble_load(const TriMesh& mesh, const ScalarField& f,
                              DofSet dofs) {
  return assemble_load_with<0>(
      mesh, {}, [&](const Eigen::Vector3d& x, const std::array<double, 0>&) {
        return f(x);
      },
      dofs);
}

Eigen::VectorXd assemble_semilinear_residual(const TriMesh& mesh,
                                             const FeFunction& y,
                                             const Nonlinearity& nl, DofSet dofs) {
  return assemble_load_with<1>(
      mesh, {&y},
      [&](const Eigen::Vector3d& x, const std::array<double, 1>& v) {
        return nl.a(x, v[0]);
      },
      dofs);
}

Eigen::MatrixXd element_mass(const Eigen::MatrixXd& simplex_vertices,
                             const ScalarField& w) {
  const int d = static_cast<int>(simplex_vertices.cols());
  const int nv = d + 1;
  const QuadratureRule& rule = default_rule(d);
  Eigen::MatrixXd E(d, d);
  for (int k = 0; k < d; ++k)
    E.col(k) = (simplex_vertices.row(k + 1) - simplex_vertices.row(0)).transpose();
  const double measure = std::abs(E.determinant()) / (d == 2 ? 2.0 : 6.0);
  const double scale = measure / reference_measure(d);
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nv, nv);
  for (int q = 0; q < rule.weights.size(); ++q) {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    for (int k = 0; k < nv; ++k) {
      Eigen::Vector3d vk = Eigen::Vector3d::Zero();
      vk.head(d) = simplex_vertices.row(k).transpose();
      x += rule.barycentric(q, k) * vk;
    }
    Eigen::VectorXd lambda = rule.barycentric.row(q).transpose();
    local += (rule.weights(q) * w(x)) * lambda * lambda.transpose();
  }
  return scale * local;
}

DiracSources locate_sources(const TriMesh& mesh, const Eigen::MatrixXd& points) {
  DiracSources s;
  s.points = points;
  s.locations.reserve(points.rows());
  for (int k = 0; k < points.rows(); ++k) {
    Eigen::VectorXd z = points.row(k).transpose();
    if (!strictly_inside_domain(mesh, z))
      throw PointOutsideDomain("source point " + std::to_string(k) +
                               " is not strictly inside the domain");
    s.locations.push_back(locate_point(mesh, z));
  }
  return s;
}

Eigen::VectorXd dirac_load_vector(const TriMesh& mesh, const DiracSources& sources,
                                  const Eigen::VectorXd& u) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.interior_count());
  const int nv = mesh.dim() + 1;
  for (int k = 0; k < static_cast<int>(sources.locations.size()); ++k) {
    const PointLocation& loc = sources.locations[k];
    for (int j = 0; j < nv; ++j) {
      int dof = mesh.interior_index(mesh.cells()(loc.cell, j));
      if (dof >= 0) load(dof) += u(k) * loc.barycentric(j);
    }
  }
  return load;
}

Eigen::VectorXd dirac_load_vector(const TriMesh& mesh, const Eigen::MatrixXd& points,
                                  const Eigen::VectorXd& u) {
  return dirac_load_vector(mesh, locate_sources(mesh, points), u);
}

double source_value(const FeFunction& f, const DiracSources& sources, int k) {
  return point_value(f, sources.locations[k]);
}

}  // namespace dirac_ocp
