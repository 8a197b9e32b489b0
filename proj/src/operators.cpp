#include "dphase/operators.hpp"

#include <algorithm>
#include <cmath>

namespace dp {

double apply_A(const FemFunction& u, const FemFunction& phi, const ExponentConfig& cfg,
               const WeightField& mu, const Mesh& mesh, const QuadratureRule& rule) {
  return modular_pairing(u, phi, cfg, mu, mesh, rule).total;
}

double apply_script_A(const FemFunction& u, const FemFunction& phi, const ExponentConfig& cfg,
                      const WeightField& mu, const Mesh& mesh, const QuadratureRule& rule,
                      const NonlinearitySpec& spec, double zeta) {
  double total = apply_A(u, phi, cfg, mu, mesh, rule);

  const std::size_t nq = rule.tri_size();
  double interior = 0.0;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point2 gu = triangle_gradient(mesh, u, t);
    const double jac = 2.0 * mesh.areas[t];
    double local = 0.0;
    for (std::size_t g = 0; g < nq; ++g) {
      const double x = rule.tri_x[g], y = rule.tri_y[g];
      const double lam0 = 1.0 - x - y;
      const double uval = lam0 * u[tri[0]] + x * u[tri[1]] + y * u[tri[2]];
      const double pval = lam0 * phi[tri[0]] + x * phi[tri[1]] + y * phi[tri[2]];
      const Point2 pt = triangle_point(mesh, t, x, y);
      local += rule.tri_w[g] * evaluate_f(spec, pt, uval, gu) * pval;
    }
    interior += jac * local;
  }
  total -= interior;

  const std::size_t ne = rule.edge_size();
  double boundary = 0.0;
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& edge = mesh.boundary_edges[e];
    double local = 0.0;
    for (std::size_t g = 0; g < ne; ++g) {
      const double s = rule.edge_t[g];
      const double uval = (1.0 - s) * u[edge.a] + s * u[edge.b];
      const double pval = (1.0 - s) * phi[edge.a] + s * phi[edge.b];
      const Point2 pt = edge_point(mesh, e, s);
      const double t2 = uval * uval;
      local += rule.edge_w[g] *
               (zeta * (power_flux(t2, cfg.p) * uval) - evaluate_g(spec, pt, uval)) * pval;
    }
    boundary += edge.length * local;
  }
  total += boundary;
  return total;
}

std::vector<double> script_A_residual(const FemFunction& u, const ExponentConfig& cfg,
                                      const WeightField& mu, const Mesh& mesh,
                                      const QuadratureRule& rule, const NonlinearitySpec& spec,
                                      double zeta) {
  if (u.size() != mesh.vertex_count())
    throw std::invalid_argument("script_A_residual: coefficient/vertex count mismatch");
  std::vector<double> r(mesh.vertex_count(), 0.0);

  const std::size_t nq = rule.tri_size();
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& bg = mesh.basis_gradients[t];
    const double area = mesh.areas[t];
    const Point2 gu = triangle_gradient(mesh, u, t);
    const double g2 = gu.x * gu.x + gu.y * gu.y;
    const double mu_mean = (mu[tri[0]] + mu[tri[1]] + mu[tri[2]]) / 3.0;
    const double flux = power_flux(g2, cfg.p) + mu_mean * power_flux(g2, cfg.q);
    for (int k = 0; k < 3; ++k)
      r[tri[k]] += area * flux * (gu.x * bg[k].x + gu.y * bg[k].y);

    const double jac = 2.0 * area;
    for (std::size_t g = 0; g < nq; ++g) {
      const double x = rule.tri_x[g], y = rule.tri_y[g];
      const double lam[3] = {1.0 - x - y, x, y};
      const double uval = lam[0] * u[tri[0]] + lam[1] * u[tri[1]] + lam[2] * u[tri[2]];
      const double muval = lam[0] * mu[tri[0]] + lam[1] * mu[tri[1]] + lam[2] * mu[tri[2]];
      const Point2 pt = triangle_point(mesh, t, x, y);
      const double t2 = uval * uval;
      const double value_flux =
          (power_flux(t2, cfg.p) + muval * power_flux(t2, cfg.q)) * uval;
      const double c = jac * rule.tri_w[g] * (value_flux - evaluate_f(spec, pt, uval, gu));
      for (int k = 0; k < 3; ++k) r[tri[k]] += c * lam[k];
    }
  }

  const std::size_t ne = rule.edge_size();
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& edge = mesh.boundary_edges[e];
    for (std::size_t g = 0; g < ne; ++g) {
      const double s = rule.edge_t[g];
      const double uval = (1.0 - s) * u[edge.a] + s * u[edge.b];
      const Point2 pt = edge_point(mesh, e, s);
      const double t2 = uval * uval;
      const double c = edge.length * rule.edge_w[g] *
                       (zeta * (power_flux(t2, cfg.p) * uval) - evaluate_g(spec, pt, uval));
      r[edge.a] += c * (1.0 - s);
      r[edge.b] += c * s;
    }
  }
  return r;
}

ConditionReport check_conditions(double b1, double b2, double b3, double beta, double zeta,
                                 double lambda_robin, double lambda_steklov, double theta,
                                 double boundary_norm_term) {
  if (!(lambda_robin > 0.0) || !(lambda_steklov > 0.0))
    throw std::invalid_argument("check_conditions: eigenvalues must be positive");
  ConditionReport rep;
  rep.lambda_robin = lambda_robin;
  rep.lambda_steklov = lambda_steklov;
  rep.slackA1 = 1.0 - b1 - b2 / lambda_robin;
  rep.slackA2 = zeta - b2 * beta / lambda_robin - b3;
  rep.condA = rep.slackA1 > 0.0 && rep.slackA2 > 0.0;
  rep.slackB1 = 1.0 - std::max(b1, b2) - b3 / lambda_steklov;
  rep.slackB2 = zeta;
  rep.condB = rep.slackB1 > 0.0 && rep.slackB2 >= 0.0;
  rep.slack_trace = (beta + zeta) * boundary_norm_term - (lambda_robin + theta);
  rep.trace_alternative = rep.slack_trace > 0.0;
  return rep;
}

}  // namespace dp
