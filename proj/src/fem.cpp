#include "dphase/fem.hpp"

#include <algorithm>

namespace dp {

FemFunction pos_part(const FemFunction& u) {
  FemFunction r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = std::max(u[i], 0.0);
  return r;
}

FemFunction neg_part(const FemFunction& u) {
  FemFunction r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = std::max(-u[i], 0.0);
  return r;
}

void throw_nonfinite_interior(std::size_t triangle) {
  throw std::runtime_error("integrate_interior: non-finite integrand on triangle " +
                           std::to_string(triangle));
}

void throw_nonfinite_boundary(std::size_t edge) {
  throw std::runtime_error("integrate_boundary: non-finite integrand on boundary edge " +
                           std::to_string(edge));
}

}  // namespace dp
