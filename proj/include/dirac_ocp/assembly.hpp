// Sparse operator assembly for the P1 space: stiffness, weighted mass,
// semilinear residual terms, generic quadrature loads and Dirac load vectors.
// Operators are CSR (row-major Eigen sparse) over either the interior
// degrees of freedom (Dirichlet rows/columns eliminated) or all vertices.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <vector>

#include "dirac_ocp/fe_function.hpp"
#include "dirac_ocp/field.hpp"
#include "dirac_ocp/mesh.hpp"
#include "dirac_ocp/nonlinearity.hpp"
#include "dirac_ocp/quadrature.hpp"

namespace dirac_ocp {

using SparseOperator = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class DofSet { interior, all };

namespace detail {

// Per-cell quadrature geometry shared by the kernels below.
struct CellQuad {
  double measure;                       // |T|
  std::array<Eigen::Vector3d, 4> vertex;  // padded vertex coordinates
};

inline CellQuad cell_quad(const TriMesh& mesh, int c) {
  CellQuad q;
  q.measure = cell_measure(mesh, c);
  for (int k = 0; k < mesh.dim() + 1; ++k)
    q.vertex[k] = mesh.vertex3(mesh.cells()(c, k));
  return q;
}

inline int dof_of(const TriMesh& mesh, int vertex, DofSet dofs) {
  return dofs == DofSet::all ? vertex : mesh.interior_index(vertex);
}

}  // namespace detail

// Integrate f over the mesh with the default rule. f is called per
// quadrature point with the physical coordinates and the P1 values of the
// attached functions (all on the same mesh).
template <std::size_t K, class F>
double integrate_with(const TriMesh& mesh,
                      const std::array<const FeFunction*, K>& attached, F&& f) {
  const QuadratureRule& rule = default_rule(mesh.dim());
  const double ref = reference_measure(mesh.dim());
  const int nv = mesh.dim() + 1;
  double total = 0.0;
  std::array<double, K> vals{};
  for (int c = 0; c < mesh.cell_count(); ++c) {
    auto cq = detail::cell_quad(mesh, c);
    const double scale = cq.measure / ref;
    double cell_sum = 0.0;
    for (int q = 0; q < rule.weights.size(); ++q) {
      Eigen::Vector3d x = Eigen::Vector3d::Zero();
      for (int k = 0; k < nv; ++k) x += rule.barycentric(q, k) * cq.vertex[k];
      for (std::size_t a = 0; a < K; ++a) {
        double v = 0.0;
        for (int k = 0; k < nv; ++k)
          v += rule.barycentric(q, k) * attached[a]->values(mesh.cells()(c, k));
        vals[a] = v;
      }
      cell_sum += rule.weights(q) * f(x, vals);
    }
    total += scale * cell_sum;
  }
  return total;
}

// Assemble the load vector with entries  integral of f * phi_i.  Same calling
// convention as integrate_with.
template <std::size_t K, class F>
Eigen::VectorXd assemble_load_with(const TriMesh& mesh,
                                   const std::array<const FeFunction*, K>& attached,
                                   F&& f, DofSet dofs = DofSet::interior) {
  const QuadratureRule& rule = default_rule(mesh.dim());
  const double ref = reference_measure(mesh.dim());
  const int nv = mesh.dim() + 1;
  const int n = dofs == DofSet::all ? mesh.vertex_count() : mesh.interior_count();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
  std::array<double, K> vals{};
  for (int c = 0; c < mesh.cell_count(); ++c) {
    auto cq = detail::cell_quad(mesh, c);
    const double scale = cq.measure / ref;
    std::array<double, 4> local{};
    for (int q = 0; q < rule.weights.size(); ++q) {
      Eigen::Vector3d x = Eigen::Vector3d::Zero();
      for (int k = 0; k < nv; ++k) x += rule.barycentric(q, k) * cq.vertex[k];
      for (std::size_t a = 0; a < K; ++a) {
        double v = 0.0;
        for (int k = 0; k < nv; ++k)
          v += rule.barycentric(q, k) * attached[a]->values(mesh.cells()(c, k));
        vals[a] = v;
      }
      const double fw = rule.weights(q) * f(x, vals);
      for (int k = 0; k < nv; ++k) local[k] += fw * rule.barycentric(q, k);
    }
    for (int k = 0; k < nv; ++k) {
      int dof = detail::dof_of(mesh, mesh.cells()(c, k), dofs);
      if (dof >= 0) load(dof) += scale * local[k];
    }
  }
  return load;
}

// Stiffness matrix: exact element integrals of grad(phi_i) . grad(phi_j).
SparseOperator assemble_stiffness(const TriMesh& mesh,
                                  DofSet dofs = DofSet::interior);

// Weighted mass matrix via quadrature. Throws MonotonicityViolation when the
// weight is negative at any quadrature point.
SparseOperator assemble_weighted_mass(const TriMesh& mesh, const ScalarField& w,
                                      DofSet dofs = DofSet::interior);

// Same, with the weight composed with a P1 field: w(x) = g(x, y(x)).
SparseOperator assemble_weighted_mass(
    const TriMesh& mesh, const std::function<double(const Eigen::Vector3d&, double)>& g,
    const FeFunction& y, DofSet dofs = DofSet::interior);

// Plain load: integral of f * phi_i.
Eigen::VectorXd assemble_load(const TriMesh& mesh, const ScalarField& f,
                              DofSet dofs = DofSet::interior);

// Semilinear residual term: entries  integral of a(x, y_h(x)) * phi_i(x).
Eigen::VectorXd assemble_semilinear_residual(const TriMesh& mesh,
                                             const FeFunction& y,
                                             const Nonlinearity& nl,
                                             DofSet dofs = DofSet::interior);

// Element-level weighted mass block (exposed for direct verification).
Eigen::MatrixXd element_mass(const Eigen::MatrixXd& simplex_vertices,
                             const ScalarField& w);

// Dirac sources: point set with cached locations on one mesh. The cached
// barycentrics are reused for both load assembly and point evaluation so the
// two stay bitwise consistent.
struct DiracSources {
  Eigen::MatrixXd points;  // ell x dim
  std::vector<PointLocation> locations;
};

DiracSources locate_sources(const TriMesh& mesh, const Eigen::MatrixXd& points);

// Load vector with entries  sum_z u_z phi_i(z); boundary dofs dropped.
Eigen::VectorXd dirac_load_vector(const TriMesh& mesh, const DiracSources& sources,
                                  const Eigen::VectorXd& u);
Eigen::VectorXd dirac_load_vector(const TriMesh& mesh, const Eigen::MatrixXd& points,
                                  const Eigen::VectorXd& u);

// Value of a P1 function at source k via the cached location.
double source_value(const FeFunction& f, const DiracSources& sources, int k);

}  // namespace dirac_ocp
