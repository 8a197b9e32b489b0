#include "dphase/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace dp {

void gauss_legendre_unit(int n, std::vector<double>& points, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_unit: n must be >= 1");
  points.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = std::acos(-1.0);
  // Roots of P_n on [-1,1] by Newton iteration, then mapped to [0,1].
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(pi * (k + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    points[k] = 0.5 * (1.0 - x);  // descending root -> ascending point
    weights[k] = 0.5 * w;
    points[n - 1 - k] = 0.5 * (1.0 + x);
    weights[n - 1 - k] = 0.5 * w;
  }
}

QuadratureRule make_quadrature(int order) {
  if (order < 1) throw std::invalid_argument("make_quadrature: order must be >= 1");
  QuadratureRule rule;
  rule.order = order;

  // Duffy map (u,v) -> (u, v(1-u)) with Jacobian (1-u): a monomial of total
  // degree d becomes degree <= d+1 in u and <= d in v, so n Gauss points per
  // direction with 2n-1 >= order+1 are exact.
  const int n = (order + 3) / 2;
  std::vector<double> gp, gw;
  gauss_legendre_unit(n, gp, gw);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      rule.tri_x.push_back(gp[i]);
      rule.tri_y.push_back(gp[j] * (1.0 - gp[i]));
      rule.tri_w.push_back(gw[i] * gw[j] * (1.0 - gp[i]));
    }
  }

  const int ne = (order + 2) / 2;
  gauss_legendre_unit(ne, rule.edge_t, rule.edge_w);
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = make_quadrature(8);
  return rule;
}

}  // namespace dp
