#include "dirac_ocp/nonlinearity.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dirac_ocp {

Nonlinearity make_nonlinearity(const std::string& name, double scale) {
  if (scale < 0)
    throw std::invalid_argument("nonlinearity scale must be nonnegative to keep "
                                "a(x, .) monotone increasing");
  Nonlinearity nl;
  nl.name = name;
  nl.scale = scale;
  const double c = scale;
  if (name == "zero") {
    nl.a = [](const Eigen::Vector3d&, double) { return 0.0; };
    nl.a_y = nl.a;
    nl.a_yy = nl.a;
    nl.growth_exponent = 0.0;
    nl.bounds_note = "phi_0 = phi_1 = phi_2 = 0";
  } else if (name == "linear") {
    nl.a = [c](const Eigen::Vector3d&, double y) { return c * y; };
    nl.a_y = [c](const Eigen::Vector3d&, double) { return c; };
    nl.a_yy = [](const Eigen::Vector3d&, double) { return 0.0; };
    nl.growth_exponent = 0.0;
    nl.bounds_note = "phi_0 = 0 (r=1 growth of a), phi_1 = c, phi_2 = 0";
  } else if (name == "cubic") {
    nl.a = [c](const Eigen::Vector3d&, double y) { return c * y * y * y; };
    nl.a_y = [c](const Eigen::Vector3d&, double y) { return 3.0 * c * y * y; };
    nl.a_yy = [c](const Eigen::Vector3d&, double y) { return 6.0 * c * y; };
    nl.growth_exponent = 2.0;
    nl.bounds_note = "phi_0 = phi_1 = phi_2 = 0, polynomial growth r = 2 of a_y";
  } else if (name == "arctan") {
    nl.a = [c](const Eigen::Vector3d&, double y) { return c * std::atan(y); };
    nl.a_y = [c](const Eigen::Vector3d&, double y) { return c / (1.0 + y * y); };
    nl.a_yy = [c](const Eigen::Vector3d&, double y) {
      double s = 1.0 + y * y;
      return -2.0 * c * y / (s * s);
    };
    nl.growth_exponent = 0.0;
    nl.bounds_note = "phi_0 = c*pi/2, phi_1 = c, phi_2 = c (all bounded)";
  } else {
    throw std::invalid_argument("unknown nonlinearity '" + name +
                                "' (known: zero, linear, cubic, arctan)");
  }
  return nl;
}

const std::vector<std::string>& nonlinearity_names() {
  static const std::vector<std::string> names = {"zero", "linear", "cubic",
                                                 "arctan"};
  return names;
}

double derivative_consistency_defect(const Nonlinearity& nl,
                                     unsigned long long seed, int samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0), val(-3.0, 3.0);
  const double eps = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    Eigen::Vector3d x(coord(rng), coord(rng), coord(rng));
    double y = val(rng);
    double fd1 = (nl.a(x, y + eps) - nl.a(x, y - eps)) / (2 * eps);
    double fd2 = (nl.a_y(x, y + eps) - nl.a_y(x, y - eps)) / (2 * eps);
    double s1 = std::max(1.0, std::abs(nl.a_y(x, y)));
    double s2 = std::max(1.0, std::abs(nl.a_yy(x, y)));
    worst = std::max(worst, std::abs(fd1 - nl.a_y(x, y)) / s1);
    worst = std::max(worst, std::abs(fd2 - nl.a_yy(x, y)) / s2);
  }
  return worst;
}

}  // namespace dirac_ocp
