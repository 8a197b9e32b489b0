#include <doctest.h>

#include <cmath>

#include "dphase/quadrature.hpp"

using namespace dp;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// Exact integral of x^a y^b over the reference triangle.
double tri_monomial(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

double tri_quad(const QuadratureRule& rule, int a, int b) {
  double s = 0.0;
  for (std::size_t g = 0; g < rule.tri_size(); ++g)
    s += rule.tri_w[g] * std::pow(rule.tri_x[g], a) * std::pow(rule.tri_y[g], b);
  return s;
}

double edge_quad(const QuadratureRule& rule, int k) {
  double s = 0.0;
  for (std::size_t g = 0; g < rule.edge_size(); ++g)
    s += rule.edge_w[g] * std::pow(rule.edge_t[g], k);
  return s;
}

}  // namespace

TEST_CASE("gauss-legendre on [0,1] integrates monomials to degree 2n-1") {
  for (int n = 1; n <= 6; ++n) {
    std::vector<double> pts, wts;
    gauss_legendre_unit(n, pts, wts);
    REQUIRE(pts.size() == static_cast<std::size_t>(n));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += wts[i] * std::pow(pts[i], k);
      CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("default rule weight sums match the reference measures") {
  const QuadratureRule& rule = default_rule();
  CHECK(rule.order == 8);
  double tw = 0.0;
  for (double w : rule.tri_w) tw += w;
  CHECK(tw == doctest::Approx(0.5).epsilon(1e-14));
  double ew = 0.0;
  for (double w : rule.edge_w) ew += w;
  CHECK(ew == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t g = 0; g < rule.tri_size(); ++g) {
    CHECK(rule.tri_x[g] >= 0.0);
    CHECK(rule.tri_y[g] >= 0.0);
    CHECK(rule.tri_x[g] + rule.tri_y[g] <= 1.0 + 1e-14);
  }
}

TEST_CASE("default rule is exact for triangle monomials of total degree 8") {
  const QuadratureRule& rule = default_rule();
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; a + b <= 8; ++b) {
      const double exact = tri_monomial(a, b);
      CHECK(tri_quad(rule, a, b) == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("default rule edge part is exact past the nominal order") {
  const QuadratureRule& rule = default_rule();
  // five Gauss points: exact through degree 9
  for (int k = 0; k <= 9; ++k)
    CHECK(edge_quad(rule, k) == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
}

TEST_CASE("make_quadrature honors the requested order") {
  for (int order : {2, 4, 6, 10}) {
    const QuadratureRule rule = make_quadrature(order);
    REQUIRE(rule.order == order);
    for (int a = 0; a <= order; ++a)
      for (int b = 0; a + b <= order; ++b)
        CHECK(tri_quad(rule, a, b) == doctest::Approx(tri_monomial(a, b)).epsilon(1e-12));
    for (int k = 0; k <= order; ++k)
      CHECK(edge_quad(rule, k) == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  }
}

TEST_CASE("default rule is a single shared instance") {
  CHECK(&default_rule() == &default_rule());
}
