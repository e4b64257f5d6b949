// Continuous piecewise-linear functions with homogeneous boundary trace:
// one coefficient per mesh vertex, boundary entries pinned to zero.
#pragma once

#include <Eigen/Dense>

#include "dirac_ocp/field.hpp"
#include "dirac_ocp/mesh.hpp"

namespace dirac_ocp {

struct FeFunction {
  MeshPtr mesh;
  Eigen::VectorXd values;  // per vertex; exactly 0 at boundary vertices
};

FeFunction zero_function(MeshPtr mesh);

// Scatter an interior-dof vector to a full vertex vector (boundary = 0).
FeFunction from_interior(MeshPtr mesh, const Eigen::VectorXd& interior);

Eigen::VectorXd interior_of(const FeFunction& f);

// Nodal interpolant of a pointwise field; boundary vertices forced to zero.
FeFunction interpolate(MeshPtr mesh, const ScalarField& g);

// Value at a previously located point (barycentric combination of the cell's
// vertex values).
double point_value(const FeFunction& f, const PointLocation& loc);

// Locate-and-evaluate convenience.
double evaluate(const FeFunction& f, const Eigen::VectorXd& z);

// Exact representation of a coarse function on a descendant mesh obtained by
// repeated refine_uniform: parent values are copied, midpoint values are the
// averages of their edge endpoints. Throws MeshMismatch when `fine` is not a
// descendant of (or equal to) the function's mesh.
FeFunction prolongate_to(const FeFunction& coarse, const MeshPtr& fine);

// Wrap a FE function as a pointwise field (locate_point per evaluation).
ScalarField field_of(FeFunction f);

}  // namespace dirac_ocp
