#include "dirac_ocp/norms.hpp"

#include <cmath>

#include "dirac_ocp/assembly.hpp"

namespace dirac_ocp {

namespace {

bool vertex_in_subdomain(const TriMesh& mesh, int v,
                         const std::optional<Eigen::MatrixXd>& omega1) {
  if (!omega1) return true;
  return point_in_convex_polygon(*omega1, mesh.vertices()(v, 0),
                                 mesh.vertices()(v, 1));
}

}  // namespace

ErrorNorms norm_errors(const FeFunction& f_fine, const FeFunction& f_coarse,
                       const std::optional<Eigen::MatrixXd>& omega1) {
  FeFunction g = prolongate_to(f_coarse, f_fine.mesh);
  const TriMesh& mesh = *f_fine.mesh;
  ErrorNorms e;
  e.l2 = std::sqrt(integrate_with<2>(
      mesh, {&f_fine, &g}, [](const Eigen::Vector3d&, const std::array<double, 2>& v) {
        double d = v[0] - v[1];
        return d * d;
      }));
  e.l1 = integrate_with<2>(
      mesh, {&f_fine, &g}, [](const Eigen::Vector3d&, const std::array<double, 2>& v) {
        return std::abs(v[0] - v[1]);
      });
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (vertex_in_subdomain(mesh, v, omega1))
      e.linf = std::max(e.linf, std::abs(f_fine.values(v) - g.values(v)));
  return e;
}

ErrorNorms norm_errors(const FeFunction& f_fine, const ScalarField& exact,
                       const std::optional<Eigen::MatrixXd>& omega1) {
  const TriMesh& mesh = *f_fine.mesh;
  ErrorNorms e;
  e.l2 = std::sqrt(integrate_with<1>(
      mesh, {&f_fine},
      [&](const Eigen::Vector3d& x, const std::array<double, 1>& v) {
        double d = v[0] - exact(x);
        return d * d;
      }));
  e.l1 = integrate_with<1>(
      mesh, {&f_fine},
      [&](const Eigen::Vector3d& x, const std::array<double, 1>& v) {
        return std::abs(v[0] - exact(x));
      });
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (vertex_in_subdomain(mesh, v, omega1))
      e.linf = std::max(e.linf,
                        std::abs(f_fine.values(v) - exact(mesh.vertex3(v))));
  return e;
}

}  // namespace dirac_ocp
