// Quadrature-based error norms between a fine-mesh P1 function and either a
// coarser-mesh P1 function (nested refinement) or a closed-form field.
#pragma once

#include <optional>

#include "dirac_ocp/fe_function.hpp"
#include "dirac_ocp/field.hpp"

namespace dirac_ocp {

struct ErrorNorms {
  double l2 = 0.0;
  double l1 = 0.0;
  // Max over fine-mesh vertices inside the subdomain (all vertices when no
  // subdomain was given).
  double linf = 0.0;
};

// Coarse function must live on an ancestor mesh of f_fine.mesh (or the same
// mesh); it is prolongated exactly, so the difference is P1 on the fine mesh.
// `omega1` restricts the max-norm to a closed convex ccw polygon (2D only).
ErrorNorms norm_errors(const FeFunction& f_fine, const FeFunction& f_coarse,
                       const std::optional<Eigen::MatrixXd>& omega1 = {});

ErrorNorms norm_errors(const FeFunction& f_fine, const ScalarField& exact,
                       const std::optional<Eigen::MatrixXd>& omega1 = {});

}  // namespace dirac_ocp
