#include "dphase/space.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dp {

ExponentConfig::ExponentConfig(double p_, double q_, int N_, bool strict)
    : p(p_), q(q_), N(N_), strict_mode(strict) {
  if (!(1.0 < p && p < q)) throw std::invalid_argument("ExponentConfig: requires 1 < p < q");
  if (!(p < N))
    throw std::invalid_argument("ExponentConfig: requires p < N for the critical exponents");
  if (strict_mode && !(q < N))
    throw std::invalid_argument(
        "ExponentConfig: requires q < N (disable strict_mode to override)");
}

WeightField::WeightField(std::vector<double> nodal_values) : values(std::move(nodal_values)) {
  for (double v : values)
    if (!(v >= 0.0)) throw std::invalid_argument("WeightField: requires mu >= 0 at every node");
}

WeightField WeightField::constant(const Mesh& mesh, double m) {
  return WeightField(std::vector<double>(mesh.vertex_count(), m));
}

WeightField WeightField::linear_x1(const Mesh& mesh) {
  std::vector<double> v(mesh.vertex_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mesh.vertices[i].x;
  return WeightField(std::move(v));
}

WeightField WeightField::vanishing_half_plane(const Mesh& mesh) {
  std::vector<double> v(mesh.vertex_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(mesh.vertices[i].x - 0.5, 0.0);
  return WeightField(std::move(v));
}

std::string to_csv_row(const ModularReport& report, double norm0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", report.gradient_p_term,
                report.gradient_q_term, report.value_p_term, report.value_q_term, report.total,
                norm0);
  return buf;
}

ModularReport modular_pairing(const FemFunction& u, const FemFunction& phi,
                              const ExponentConfig& cfg, const WeightField& mu, const Mesh& mesh,
                              const QuadratureRule& rule) {
  if (u.size() != mesh.vertex_count() || phi.size() != mesh.vertex_count())
    throw std::invalid_argument("modular_pairing: coefficient/vertex count mismatch");
  if (mu.values.size() != mesh.vertex_count())
    throw std::invalid_argument("modular_pairing: weight/vertex count mismatch");

  double grad_p = 0.0, grad_q = 0.0, val_p = 0.0, val_q = 0.0;
  const std::size_t nq = rule.tri_size();
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.areas[t];
    const Point2 gu = triangle_gradient(mesh, u, t);
    const Point2 gphi = triangle_gradient(mesh, phi, t);
    const double g2 = gu.x * gu.x + gu.y * gu.y;
    const double gdot = gu.x * gphi.x + gu.y * gphi.y;
    // mu is P1, so area * mean(nodal mu) integrates mu over the triangle
    // exactly; the constant gradient factors out of both phases.
    const double mu_mean = (mu[tri[0]] + mu[tri[1]] + mu[tri[2]]) / 3.0;
    grad_p += area * (power_flux(g2, cfg.p) * gdot);
    grad_q += (area * mu_mean) * (power_flux(g2, cfg.q) * gdot);

    const double jac = 2.0 * area;
    double local_p = 0.0, local_q = 0.0;
    for (std::size_t g = 0; g < nq; ++g) {
      const double x = rule.tri_x[g], y = rule.tri_y[g];
      const double lam0 = 1.0 - x - y;
      const double uval = lam0 * u[tri[0]] + x * u[tri[1]] + y * u[tri[2]];
      const double pval = lam0 * phi[tri[0]] + x * phi[tri[1]] + y * phi[tri[2]];
      const double muval = lam0 * mu[tri[0]] + x * mu[tri[1]] + y * mu[tri[2]];
      const double t2 = uval * uval;
      const double prod = uval * pval;
      local_p += rule.tri_w[g] * (power_flux(t2, cfg.p) * prod);
      local_q += rule.tri_w[g] * (muval * (power_flux(t2, cfg.q) * prod));
    }
    val_p += jac * local_p;
    val_q += jac * local_q;
  }

  ModularReport r;
  r.gradient_p_term = grad_p;
  r.gradient_q_term = grad_q;
  r.value_p_term = val_p;
  r.value_q_term = val_q;
  r.total = ((grad_p + grad_q) + val_p) + val_q;
  return r;
}

ModularReport modular_full(const FemFunction& u, const ExponentConfig& cfg, const WeightField& mu,
                           const Mesh& mesh, const QuadratureRule& rule) {
  return modular_pairing(u, u, cfg, mu, mesh, rule);
}

double modular_plain(const FemFunction& u, const ExponentConfig& cfg, const WeightField& mu,
                     const Mesh& mesh, const QuadratureRule& rule) {
  ModularReport r = modular_pairing(u, u, cfg, mu, mesh, rule);
  return r.value_p_term + r.value_q_term;
}

namespace {

double modular_of(const FemFunction& u, const ExponentConfig& cfg, const WeightField& mu,
                  const Mesh& mesh, const QuadratureRule& rule, ModularKind which) {
  if (which == ModularKind::plain) return modular_plain(u, cfg, mu, mesh, rule);
  return modular_full(u, cfg, mu, mesh, rule).total;
}

}  // namespace

double luxemburg_norm(const FemFunction& u, const ExponentConfig& cfg, const WeightField& mu,
                      const Mesh& mesh, const QuadratureRule& rule, ModularKind which) {
  bool zero = true;
  for (double c : u.coeffs)
    if (c != 0.0) zero = false;
  if (zero) return 0.0;

  FemFunction scaled(u.size());
  auto modular_at = [&](double tau) {
    for (std::size_t i = 0; i < u.size(); ++i) scaled[i] = u[i] / tau;
    return modular_of(scaled, cfg, mu, mesh, rule, which);
  };

  // tau -> modular(u/tau) is strictly decreasing for u != 0; bracket the
  // crossing of 1 by doubling or halving from tau = 1.
  double lo = 1.0, hi = 1.0;
  if (modular_at(1.0) > 1.0) {
    int k = 0;
    do {
      if (++k > 200) throw std::runtime_error("luxemburg_norm: failed to bracket (modular stays above 1)");
      hi *= 2.0;
    } while (modular_at(hi) > 1.0);
    lo = hi / 2.0;
  } else {
    int k = 0;
    do {
      if (++k > 200) throw std::runtime_error("luxemburg_norm: failed to bracket (modular stays below 1)");
      lo /= 2.0;
    } while (modular_at(lo) <= 1.0);
    hi = lo * 2.0;
  }

  while (hi - lo > 1e-12 * hi) {
    double mid = 0.5 * (lo + hi);
    if (modular_at(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ModularRelationsReport check_modular_norm_relations(const FemFunction& u,
                                                    const ExponentConfig& cfg,
                                                    const WeightField& mu, const Mesh& mesh,
                                                    const QuadratureRule& rule) {
  bool zero = true;
  for (double c : u.coeffs)
    if (c != 0.0) zero = false;
  if (zero) throw std::invalid_argument("check_modular_norm_relations: requires u != 0");

  const double slack = 1e-9;
  ModularRelationsReport rep;
  rep.norm0 = luxemburg_norm(u, cfg, mu, mesh, rule, ModularKind::full);
  rep.modular = modular_full(u, cfg, mu, mesh, rule).total;

  FemFunction unit(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) unit[i] = u[i] / rep.norm0;
  const double unit_modular = modular_full(unit, cfg, mu, mesh, rule).total;
  rep.clause_i = std::abs(unit_modular - 1.0) <= 1e-10;

  if (std::abs(rep.norm0 - 1.0) <= slack || std::abs(rep.modular - 1.0) <= slack)
    rep.clause_ii = true;  // boundary case: both sides within slack of 1
  else
    rep.clause_ii = (rep.norm0 < 1.0) == (rep.modular < 1.0);

  rep.clause_iii = true;
  if (rep.norm0 < 1.0 - slack) {
    rep.clause_iii = std::pow(rep.norm0, cfg.q) <= rep.modular + slack &&
                     rep.modular <= std::pow(rep.norm0, cfg.p) + slack;
  }
  rep.clause_iv = true;
  if (rep.norm0 > 1.0 + slack) {
    rep.clause_iv = std::pow(rep.norm0, cfg.p) <= rep.modular + slack &&
                    rep.modular <= std::pow(rep.norm0, cfg.q) + slack;
  }

  rep.ok = rep.clause_i && rep.clause_ii && rep.clause_iii && rep.clause_iv;
  if (!rep.clause_i)
    rep.failed_clause = "i";
  else if (!rep.clause_ii)
    rep.failed_clause = "ii";
  else if (!rep.clause_iii)
    rep.failed_clause = "iii";
  else if (!rep.clause_iv)
    rep.failed_clause = "iv";
  return rep;
}

}  // namespace dp
