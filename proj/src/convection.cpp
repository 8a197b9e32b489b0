#include "dphase/convection.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "dphase/descent.hpp"

namespace dp {

namespace {

// Load vector of the frozen reactions: int f(x, w, grad w) lam_i over the
// interior plus int g(x, w) lam_i over the boundary.
std::vector<double> assemble_load(const FemFunction& w, const NonlinearitySpec& spec,
                                  const Mesh& mesh, const QuadratureRule& rule) {
  std::vector<double> ell(mesh.vertex_count(), 0.0);
  const std::size_t nq = rule.tri_size();
  double lam[3];
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point2 gw = triangle_gradient(mesh, w, t);
    const double jac = 2.0 * mesh.areas[t];
    for (std::size_t g = 0; g < nq; ++g) {
      shape_values(rule.tri_x[g], rule.tri_y[g], lam);
      const double wval = lam[0] * w[tri[0]] + lam[1] * w[tri[1]] + lam[2] * w[tri[2]];
      const Point2 pt = triangle_point(mesh, t, rule.tri_x[g], rule.tri_y[g]);
      const double c = jac * rule.tri_w[g] * evaluate_f(spec, pt, wval, gw);
      for (int k = 0; k < 3; ++k) ell[tri[k]] += c * lam[k];
    }
  }
  const std::size_t ne = rule.edge_size();
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& edge = mesh.boundary_edges[e];
    for (std::size_t g = 0; g < ne; ++g) {
      const double s = rule.edge_t[g];
      const double tr = (1.0 - s) * w[edge.a] + s * w[edge.b];
      const Point2 pt = edge_point(mesh, e, s);
      const double c = edge.length * rule.edge_w[g] * evaluate_g(spec, pt, tr);
      ell[edge.a] += c * (1.0 - s);
      ell[edge.b] += c * s;
    }
  }
  return ell;
}

// Inner energy with its gradient; strictly convex for p, q > 1 and zeta >= 0.
double inner_energy(const FemFunction& u, const ExponentConfig& cfg, const WeightField& mu,
                    const Mesh& mesh, const QuadratureRule& rule, double zeta,
                    const std::vector<double>& ell, std::vector<double>& grad) {
  const double p = cfg.p;
  const double q = cfg.q;
  grad.assign(u.size(), 0.0);
  double value = 0.0;
  const std::size_t nq = rule.tri_size();
  double lam[3];

  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& bg = mesh.basis_gradients[t];
    const Point2 gu = triangle_gradient(mesh, u, t);
    const double g2 = gu.x * gu.x + gu.y * gu.y;
    const double area = mesh.areas[t];
    const double mu_mean = (mu[tri[0]] + mu[tri[1]] + mu[tri[2]]) / 3.0;
    const double fp = power_flux(g2, p);
    const double fq = power_flux(g2, q);
    value += area * ((fp * g2) / p + mu_mean * (fq * g2) / q);
    for (int k = 0; k < 3; ++k)
      grad[tri[k]] += area * (fp + mu_mean * fq) * (gu.x * bg[k].x + gu.y * bg[k].y);

    const double jac = 2.0 * area;
    for (std::size_t g = 0; g < nq; ++g) {
      shape_values(rule.tri_x[g], rule.tri_y[g], lam);
      const double uval = lam[0] * u[tri[0]] + lam[1] * u[tri[1]] + lam[2] * u[tri[2]];
      const double muval = lam[0] * mu[tri[0]] + lam[1] * mu[tri[1]] + lam[2] * mu[tri[2]];
      const double t2 = uval * uval;
      const double w = rule.tri_w[g];
      value += jac * w * ((power_flux(t2, p) * t2) / p + muval * (power_flux(t2, q) * t2) / q);
      const double c = jac * w * (power_flux(t2, p) * uval + muval * (power_flux(t2, q) * uval));
      for (int k = 0; k < 3; ++k) grad[tri[k]] += c * lam[k];
    }
  }

  const std::size_t ne = rule.edge_size();
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& edge = mesh.boundary_edges[e];
    for (std::size_t g = 0; g < ne; ++g) {
      const double s = rule.edge_t[g];
      const double tr = (1.0 - s) * u[edge.a] + s * u[edge.b];
      const double t2 = tr * tr;
      const double w = edge.length * rule.edge_w[g];
      value += w * (zeta / p) * (power_flux(t2, p) * t2);
      const double c = w * zeta * (power_flux(t2, p) * tr);
      grad[edge.a] += c * (1.0 - s);
      grad[edge.b] += c * s;
    }
  }

  for (std::size_t i = 0; i < u.size(); ++i) {
    value -= ell[i] * u[i];
    grad[i] -= ell[i];
  }
  return value;
}

}  // namespace

double picard_inner_energy(const FemFunction& u, const FemFunction& w, const ExponentConfig& cfg,
                           const WeightField& mu, const Mesh& mesh, const QuadratureRule& rule,
                           const NonlinearitySpec& spec, double zeta, std::vector<double>* grad) {
  if (u.size() != mesh.vertex_count() || w.size() != mesh.vertex_count())
    throw std::invalid_argument("picard_inner_energy: function size does not match the mesh");
  const std::vector<double> ell = assemble_load(w, spec, mesh, rule);
  std::vector<double> local;
  const double value = inner_energy(u, cfg, mu, mesh, rule, zeta, ell, grad ? *grad : local);
  return value;
}

FemFunction damped_update(const FemFunction& u_old, const FemFunction& u_new, double damping) {
  if (!(damping > 0.0) || damping > 1.0)
    throw std::invalid_argument("damped_update: damping must lie in (0, 1]");
  if (u_old.size() != u_new.size())
    throw std::invalid_argument("damped_update: size mismatch");
  FemFunction out(u_old.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = damping * u_new[i] + (1.0 - damping) * u_old[i];
  return out;
}

ConvectionResult solve_convection(const Mesh& mesh, const ExponentConfig& cfg,
                                  const WeightField& mu, const NonlinearitySpec& spec, double zeta,
                                  double beta, double lambda_robin, double lambda_steklov,
                                  const PicardOptions& opts, const QuadratureRule& rule) {
  if (opts.max_outer < 1) throw std::invalid_argument("solve_convection: max_outer must be >= 1");
  if (!(opts.damping > 0.0) || opts.damping > 1.0)
    throw std::invalid_argument("solve_convection: damping must lie in (0, 1]");
  validate_growth(spec, cfg);
  const auto& gm = spec.growth;

  ConvectionResult out;
  out.conditions =
      check_conditions(gm.b1, gm.b2, gm.b3, beta, zeta, lambda_robin, lambda_steklov, 0.0, 0.0);
  if (out.conditions.condA)
    out.condition_used = ConditionCase::A;
  else if (out.conditions.condB)
    out.condition_used = ConditionCase::B;
  out.certified = out.condition_used != ConditionCase::none;
  if (!out.certified && !opts.allow_uncertified) {
    std::ostringstream msg;
    msg << "condition gate failed; violated slacks:";
    if (!(out.conditions.slackA1 > 0.0)) msg << " slackA1 = " << out.conditions.slackA1;
    if (!(out.conditions.slackA2 > 0.0)) msg << " slackA2 = " << out.conditions.slackA2;
    if (!(out.conditions.slackB1 > 0.0)) msg << " slackB1 = " << out.conditions.slackB1;
    if (out.conditions.slackB2 < 0.0) msg << " slackB2 = " << out.conditions.slackB2;
    throw std::runtime_error(msg.str());
  }

  if (out.certified) {
    const double slack = out.condition_used == ConditionCase::A ? out.conditions.slackA1
                                                                : out.conditions.slackB1;
    const double constants = gm.omega1 * mesh.total_area() + gm.omega2 * mesh.boundary_length();
    out.norm_bound = std::max(1.0, std::pow(constants / slack, 1.0 / cfg.p));
  }

  const std::size_t n = mesh.vertex_count();
  FemFunction u(n, 0.0);
  double damping = opts.damping;
  int grow_streak = 0;
  double prev_step = std::numeric_limits<double>::infinity();

  DescentOptions dopts;
  dopts.max_iterations = opts.max_inner_iterations;
  dopts.gradient_tolerance = opts.inner_tolerance;

  for (int k = 1; k <= opts.max_outer; ++k) {
    const std::vector<double> ell = assemble_load(u, spec, mesh, rule);
    Objective obj = [&](const std::vector<double>& x, std::vector<double>& g) {
      FemFunction v;
      v.coeffs = x;
      return inner_energy(v, cfg, mu, mesh, rule, zeta, ell, g);
    };
    DescentResult inner = minimize_descent(obj, u.coeffs, dopts);
    FemFunction fresh;
    fresh.coeffs = std::move(inner.x);
    FemFunction next = damped_update(u, fresh, damping);

    FemFunction diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = next[i] - u[i];
    const double step = luxemburg_norm(diff, cfg, mu, mesh, rule);

    PicardState state;
    state.iterate = next;
    state.outer_index = k;
    state.step_norm = step;
    state.inner_residual = inner.gradient_norm;
    state.condition_used = out.condition_used;
    out.trace.push_back(std::move(state));

    if (out.certified) {
      const double norm_now = luxemburg_norm(next, cfg, mu, mesh, rule);
      if (norm_now > out.norm_bound) {
        std::ostringstream msg;
        msg << "boundedness monitor: iterate " << k << " has norm " << norm_now
            << " above the a priori bound " << out.norm_bound;
        throw std::runtime_error(msg.str());
      }
    }

    u = std::move(next);
    out.outer_iterations = k;
    if (step < opts.step_tolerance) {
      out.converged = true;
      break;
    }

    grow_streak = step > prev_step ? grow_streak + 1 : 0;
    prev_step = step;
    if (grow_streak >= 5) {
      damping *= 0.5;
      grow_streak = 0;
      prev_step = std::numeric_limits<double>::infinity();
      if (damping < 1.0 / 128.0) {
        std::ostringstream msg;
        msg << "picard iteration diverging: step norm grew for five consecutive outer steps "
            << "and automatic halving is exhausted; rerun with a smaller initial damping";
        throw std::runtime_error(msg.str());
      }
    }
  }

  out.solution = u;
  out.residual_norm = vec::max_norm(script_A_residual(u, cfg, mu, mesh, rule, spec, zeta));
  return out;
}

}  // namespace dp
