#include <doctest.h>

#include <cmath>

#include "dirac_ocp/quadrature.hpp"

using namespace dirac_ocp;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Exact monomial integrals over the reference simplex:
//   2D: int x^p y^q = p! q! / (p+q+2)!
//   3D: int x^p y^q z^r = p! q! r! / (p+q+r+3)!
double exact_monomial(int dim, int p, int q, int r) {
  if (dim == 2) return factorial(p) * factorial(q) / factorial(p + q + 2);
  return factorial(p) * factorial(q) * factorial(r) / factorial(p + q + r + 3);
}

double quad_monomial(const QuadratureRule& rule, int p, int q, int r) {
  double sum = 0;
  for (int k = 0; k < rule.weights.size(); ++k) {
    // Reference simplex coordinates are the barycentric entries 1..dim.
    double x = rule.barycentric(k, 1);
    double y = rule.barycentric(k, 2);
    double z = rule.dim == 3 ? rule.barycentric(k, 3) : 0.0;
    sum += rule.weights(k) * std::pow(x, p) * std::pow(y, q) * std::pow(z, r);
  }
  return sum;
}

}  // namespace

TEST_CASE("triangle rule: positivity, weight sum, degree-4 exactness") {
  const QuadratureRule& rule = triangle_rule_degree4();
  CHECK(rule.weights.minCoeff() > 0);
  CHECK(rule.weights.sum() == doctest::Approx(0.5).epsilon(1e-14));
  for (int k = 0; k < rule.weights.size(); ++k)
    CHECK(rule.barycentric.row(k).sum() == doctest::Approx(1.0).epsilon(1e-14));

  for (int p = 0; p <= rule.exactness_degree; ++p)
    for (int q = 0; p + q <= rule.exactness_degree; ++q)
      CHECK(quad_monomial(rule, p, q, 0) ==
            doctest::Approx(exact_monomial(2, p, q, 0)).epsilon(1e-13));
}

TEST_CASE("tetrahedron rule: positivity, weight sum, degree-5 exactness") {
  const QuadratureRule& rule = tetrahedron_rule_degree5();
  CHECK(rule.weights.minCoeff() > 0);
  CHECK(rule.weights.sum() == doctest::Approx(1.0 / 6.0).epsilon(1e-13));

  for (int p = 0; p <= rule.exactness_degree; ++p)
    for (int q = 0; p + q <= rule.exactness_degree; ++q)
      for (int r = 0; p + q + r <= rule.exactness_degree; ++r) {
        double approx = quad_monomial(rule, p, q, r);
        double exact = exact_monomial(3, p, q, r);
        CHECK(std::abs(approx - exact) <= 1e-13);
      }
}
