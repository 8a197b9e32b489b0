#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dphase/mesh.hpp"
#include "dphase/quadrature.hpp"

namespace dp {

/// P1 nodal function: one coefficient per mesh vertex.
struct FemFunction {
  std::vector<double> coeffs;

  FemFunction() = default;
  explicit FemFunction(std::size_t n, double value = 0.0) : coeffs(n, value) {}

  std::size_t size() const { return coeffs.size(); }
  double& operator[](std::size_t i) { return coeffs[i]; }
  double operator[](std::size_t i) const { return coeffs[i]; }
};

/// Nodal positive part max(u, 0).
FemFunction pos_part(const FemFunction& u);
/// Nodal negative part max(-u, 0), so u = pos_part(u) - neg_part(u) at nodes.
FemFunction neg_part(const FemFunction& u);

/// Flux coefficient t2^{(r-2)/2} where t2 = |t|^2; defined as 0 at t2 = 0,
/// the continuous extension of t -> |t|^{r-2}t divided by t (valid for r > 1).
inline double power_flux(double t2, double r) {
  if (t2 == 0.0) return 0.0;
  return std::pow(t2, 0.5 * (r - 2.0));
}

/// |s|^{r-2} s, continuous at 0 for r > 1.
inline double signed_power(double s, double r) {
  if (s == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(s), r - 1.0), s);
}

/// Barycentric shape values of the reference triangle at (x, y).
inline void shape_values(double x, double y, double lam[3]) {
  lam[0] = 1.0 - x - y;
  lam[1] = x;
  lam[2] = y;
}

/// Physical coordinates of reference point (x, y) in triangle t.
inline Point2 triangle_point(const Mesh& mesh, std::size_t t, double x, double y) {
  const auto& tri = mesh.triangles[t];
  const Point2& p0 = mesh.vertices[tri[0]];
  const Point2& p1 = mesh.vertices[tri[1]];
  const Point2& p2 = mesh.vertices[tri[2]];
  double lam0 = 1.0 - x - y;
  return {lam0 * p0.x + x * p1.x + y * p2.x, lam0 * p0.y + x * p1.y + y * p2.y};
}

/// P1 interpolation of u at reference point (x, y) in triangle t.
inline double triangle_value(const Mesh& mesh, const FemFunction& u, std::size_t t, double x,
                             double y) {
  const auto& tri = mesh.triangles[t];
  return (1.0 - x - y) * u[tri[0]] + x * u[tri[1]] + y * u[tri[2]];
}

/// Constant P1 gradient of u on triangle t.
inline Point2 triangle_gradient(const Mesh& mesh, const FemFunction& u, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  const auto& g = mesh.basis_gradients[t];
  return {u[tri[0]] * g[0].x + u[tri[1]] * g[1].x + u[tri[2]] * g[2].x,
          u[tri[0]] * g[0].y + u[tri[1]] * g[1].y + u[tri[2]] * g[2].y};
}

/// Point on boundary edge e at parameter s in [0, 1].
inline Point2 edge_point(const Mesh& mesh, std::size_t e, double s) {
  const auto& edge = mesh.boundary_edges[e];
  const Point2& pa = mesh.vertices[edge.a];
  const Point2& pb = mesh.vertices[edge.b];
  return {pa.x + s * (pb.x - pa.x), pa.y + s * (pb.y - pa.y)};
}

/// Trace of u on boundary edge e at parameter s.
inline double edge_value(const Mesh& mesh, const FemFunction& u, std::size_t e, double s) {
  const auto& edge = mesh.boundary_edges[e];
  return (1.0 - s) * u[edge.a] + s * u[edge.b];
}

[[noreturn]] void throw_nonfinite_interior(std::size_t triangle);
[[noreturn]] void throw_nonfinite_boundary(std::size_t edge);

/// Interior integral of h(point, u value, u gradient) over the mesh.
/// The P1 gradient is constant per triangle; values are interpolated at the
/// rule's points. Throws on a non-finite integrand, naming the triangle.
template <class H>
double integrate_interior(H&& h, const FemFunction& u, const Mesh& mesh,
                          const QuadratureRule& rule) {
  if (u.size() != mesh.vertex_count())
    throw std::invalid_argument("integrate_interior: coefficient/vertex count mismatch");
  double total = 0.0;
  const std::size_t nq = rule.tri_size();
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const Point2 grad = triangle_gradient(mesh, u, t);
    const double jac = 2.0 * mesh.areas[t];
    double local = 0.0;
    for (std::size_t g = 0; g < nq; ++g) {
      const Point2 x = triangle_point(mesh, t, rule.tri_x[g], rule.tri_y[g]);
      const double val = triangle_value(mesh, u, t, rule.tri_x[g], rule.tri_y[g]);
      const double hv = h(x, val, grad);
      if (!std::isfinite(hv)) throw_nonfinite_interior(t);
      local += rule.tri_w[g] * hv;
    }
    total += jac * local;
  }
  return total;
}

/// Boundary integral of h(point, trace value) over all boundary edges.
template <class H>
double integrate_boundary(H&& h, const FemFunction& u, const Mesh& mesh,
                          const QuadratureRule& rule) {
  if (u.size() != mesh.vertex_count())
    throw std::invalid_argument("integrate_boundary: coefficient/vertex count mismatch");
  double total = 0.0;
  const std::size_t nq = rule.edge_size();
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    double local = 0.0;
    for (std::size_t g = 0; g < nq; ++g) {
      const Point2 x = edge_point(mesh, e, rule.edge_t[g]);
      const double val = edge_value(mesh, u, e, rule.edge_t[g]);
      const double hv = h(x, val);
      if (!std::isfinite(hv)) throw_nonfinite_boundary(e);
      local += rule.edge_w[g] * hv;
    }
    total += mesh.boundary_edges[e].length * local;
  }
  return total;
}

}  // namespace dp
