// Quadrature rules on the reference simplex, stored in barycentric
// coordinates with weights summing to the reference measure (1/2 for the
// triangle, 1/6 for the tetrahedron).
#pragma once

#include <Eigen/Dense>

namespace dirac_ocp {

struct QuadratureRule {
  int dim = 2;
  int exactness_degree = 0;
  Eigen::MatrixXd barycentric;  // q x (dim+1)
  Eigen::VectorXd weights;      // q, positive, sum = reference measure
};

// Six-point degree-4 rule; integrates y_h^3 * phi exactly for P1 fields.
const QuadratureRule& triangle_rule_degree4();

// Fourteen-point degree-5 rule with positive weights.
const QuadratureRule& tetrahedron_rule_degree5();

const QuadratureRule& default_rule(int dim);

double reference_measure(int dim);

}  // namespace dirac_ocp
