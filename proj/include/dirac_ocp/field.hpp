// Pointwise scalar coefficient fields. Points are always passed as 3-vectors;
// two-dimensional problems use (x, y, 0).
#pragma once

#include <Eigen/Dense>
#include <functional>

namespace dirac_ocp {

using ScalarField = std::function<double(const Eigen::Vector3d&)>;

inline ScalarField constant_field(double c) {
  return [c](const Eigen::Vector3d&) { return c; };
}

}  // namespace dirac_ocp
