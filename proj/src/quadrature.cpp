#include "dirac_ocp/quadrature.hpp"

#include <stdexcept>

namespace dirac_ocp {

double reference_measure(int dim) { return dim == 2 ? 0.5 : 1.0 / 6.0; }

const QuadratureRule& triangle_rule_degree4() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    r.dim = 2;
    r.exactness_degree = 4;
    r.barycentric.resize(6, 3);
    r.weights.resize(6);
    const double a1 = 0.108103018168070, b1 = 0.445948490915965;
    const double w1 = 0.223381589678011;
    const double a2 = 0.816847572980459, b2 = 0.091576213509771;
    const double w2 = 0.109951743655322;
    int row = 0;
    auto orbit = [&](double a, double b, double w) {
      r.barycentric.row(row) << a, b, b;
      r.weights(row++) = w;
      r.barycentric.row(row) << b, a, b;
      r.weights(row++) = w;
      r.barycentric.row(row) << b, b, a;
      r.weights(row++) = w;
    };
    orbit(a1, b1, w1);
    orbit(a2, b2, w2);
    r.weights *= reference_measure(2);  // tabulated weights sum to 1
    return r;
  }();
  return rule;
}

const QuadratureRule& tetrahedron_rule_degree5() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    r.dim = 3;
    r.exactness_degree = 5;
    r.barycentric.resize(14, 4);
    r.weights.resize(14);
    const double a1 = 0.067342242210098, b1 = 0.310885919263301;
    const double w1 = 0.112687925718016;
    const double a2 = 0.721794249067326, b2 = 0.092735250310891;
    const double w2 = 0.073493043116362;
    const double c = 0.454496295874350, d = 0.045503704125650;
    const double w3 = 0.042546020777082;
    int row = 0;
    auto vertex_orbit = [&](double a, double b, double w) {
      for (int k = 0; k < 4; ++k) {
        r.barycentric.row(row) << b, b, b, b;
        r.barycentric(row, k) = a;
        r.weights(row++) = w;
      }
    };
    vertex_orbit(a1, b1, w1);
    vertex_orbit(a2, b2, w2);
    static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (const auto& p : pairs) {
      r.barycentric.row(row) << d, d, d, d;
      r.barycentric(row, p[0]) = c;
      r.barycentric(row, p[1]) = c;
      r.weights(row++) = w3;
    }
    r.weights *= reference_measure(3);
    return r;
  }();
  return rule;
}

const QuadratureRule& default_rule(int dim) {
  if (dim == 2) return triangle_rule_degree4();
  if (dim == 3) return tetrahedron_rule_degree5();
  throw std::invalid_argument("quadrature rules exist for dim 2 and 3 only");
}

}  // namespace dirac_ocp
