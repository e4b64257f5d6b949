// The monotone nonlinearity a(x, y) of the state equation together with its
// first and second y-derivatives and growth metadata. Built-ins form a small
// registry so that a, a_y and a_yy stay analytically consistent.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dirac_ocp/field.hpp"

namespace dirac_ocp {

struct Nonlinearity {
  std::string name;
  std::function<double(const Eigen::Vector3d&, double)> a;
  std::function<double(const Eigen::Vector3d&, double)> a_y;   // >= 0
  std::function<double(const Eigen::Vector3d&, double)> a_yy;
  // Growth exponent r of the first-derivative bound |a_y| <= phi_1 + C |y|^r;
  // three-dimensional problems require r < 2.
  double growth_exponent = 0.0;
  double scale = 1.0;  // the constant C_a of the growth bounds
  std::string bounds_note;  // documents the phi_0/phi_1/phi_2 majorants
};

// Registry: zero, linear (c*y), cubic (c*y^3), arctan (c*atan(y)).
// Throws std::invalid_argument for unknown names, scale must be >= 0 to keep
// the family monotone.
Nonlinearity make_nonlinearity(const std::string& name, double scale = 1.0);

const std::vector<std::string>& nonlinearity_names();

// Finite-difference consistency probe of (a, a_y, a_yy) on `samples` random
// (x, y) pairs; returns the worst relative defect. Used at spec-validation
// time as a guard against registry typos.
double derivative_consistency_defect(const Nonlinearity& nl,
                                     unsigned long long seed = 0,
                                     int samples = 64);

}  // namespace dirac_ocp
