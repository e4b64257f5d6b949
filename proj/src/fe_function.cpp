#include "dirac_ocp/fe_function.hpp"

#include <vector>

namespace dirac_ocp {

FeFunction zero_function(MeshPtr mesh) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mesh->vertex_count());
  return FeFunction{std::move(mesh), std::move(v)};
}

FeFunction from_interior(MeshPtr mesh, const Eigen::VectorXd& interior) {
  FeFunction f = zero_function(std::move(mesh));
  const auto& iv = f.mesh->interior_vertices();
  for (int k = 0; k < static_cast<int>(iv.size()); ++k) f.values(iv[k]) = interior(k);
  return f;
}

Eigen::VectorXd interior_of(const FeFunction& f) {
  const auto& iv = f.mesh->interior_vertices();
  Eigen::VectorXd out(iv.size());
  for (int k = 0; k < static_cast<int>(iv.size()); ++k) out(k) = f.values(iv[k]);
  return out;
}

FeFunction interpolate(MeshPtr mesh, const ScalarField& g) {
  FeFunction f = zero_function(std::move(mesh));
  for (int v = 0; v < f.mesh->vertex_count(); ++v)
    if (!f.mesh->boundary_vertex()[v]) f.values(v) = g(f.mesh->vertex3(v));
  return f;
}

double point_value(const FeFunction& f, const PointLocation& loc) {
  const auto& cells = f.mesh->cells();
  double value = 0.0;
  for (int k = 0; k < f.mesh->dim() + 1; ++k)
    value += loc.barycentric(k) * f.values(cells(loc.cell, k));
  return value;
}

double evaluate(const FeFunction& f, const Eigen::VectorXd& z) {
  return point_value(f, locate_point(*f.mesh, z));
}

FeFunction prolongate_to(const FeFunction& coarse, const MeshPtr& fine) {
  // Collect the lineage from `fine` back to the coarse mesh.
  std::vector<MeshPtr> chain;
  MeshPtr m = fine;
  while (m && m.get() != coarse.mesh.get()) {
    chain.push_back(m);
    m = m->parent();
  }
  if (!m)
    throw MeshMismatch("target mesh is not a refinement of the function's mesh");

  Eigen::VectorXd values = coarse.values;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const TriMesh& child = **it;
    const int old_nv = static_cast<int>(values.size());
    Eigen::VectorXd next(child.vertex_count());
    next.head(old_nv) = values;
    const auto& parents = child.midpoint_parents();
    for (int k = 0; k < static_cast<int>(parents.size()); ++k)
      next(old_nv + k) = 0.5 * (values(parents[k][0]) + values(parents[k][1]));
    values = std::move(next);
  }
  return FeFunction{fine, std::move(values)};
}

ScalarField field_of(FeFunction f) {
  return [f = std::move(f)](const Eigen::Vector3d& x) {
    return evaluate(f, x.head(f.mesh->dim()));
  };
}

}  // namespace dirac_ocp
