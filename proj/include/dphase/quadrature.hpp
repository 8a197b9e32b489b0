#ifndef DPHASE_QUADRATURE_HPP
#define DPHASE_QUADRATURE_HPP

#include <vector>

namespace dp {

/// Quadrature data for the reference triangle {x >= 0, y >= 0, x + y <= 1}
/// and the reference edge [0,1]. `order` is the highest total polynomial
/// degree integrated exactly by both parts.
struct QuadratureRule {
  int order = 0;
  std::vector<double> tri_x;
  std::vector<double> tri_y;
  std::vector<double> tri_w;   // sums to 1/2 (reference area)
  std::vector<double> edge_t;  // parameters in [0,1]
  std::vector<double> edge_w;  // sums to 1

  std::size_t tri_size() const { return tri_w.size(); }
  std::size_t edge_size() const { return edge_w.size(); }
};

/// Gauss-Legendre nodes/weights on [0,1]; exact for degree <= 2n-1.
void gauss_legendre_unit(int n, std::vector<double>& points, std::vector<double>& weights);

/// Build a rule exact for total degree <= order. The triangle part is a
/// conical product of Gauss-Legendre rules (Duffy map), so no tabulated
/// point sets are needed.
QuadratureRule make_quadrature(int order);

/// The rule shared by all modular/operator evaluations (order 8).
const QuadratureRule& default_rule();

}  // namespace dp

#endif
