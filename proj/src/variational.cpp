#include "dphase/variational.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dphase/descent.hpp"
#include "dphase/space.hpp"

namespace dp {

namespace {

// Single sweep over the mesh; fills the breakdown and, when grad is non-null,
// accumulates the exact derivative of the same quadrature sums into *grad.
EnergyBreakdown energy_impl(const FemFunction& u, const TruncationSet& T,
                            const NonlinearitySpec& spec, const ExponentConfig& cfg,
                            const WeightField& mu, const Mesh& mesh, const QuadratureRule& rule,
                            std::vector<double>* grad) {
  if (u.size() != mesh.vertex_count())
    throw std::invalid_argument("energy: coefficient/vertex count mismatch");
  if (grad) grad->assign(mesh.vertex_count(), 0.0);

  EnergyBreakdown out;
  const double p = cfg.p;
  const double q = cfg.q;
  const std::size_t nq = rule.tri_size();
  double lam[3];

  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point2 gu = triangle_gradient(mesh, u, t);
    const double g2 = gu.x * gu.x + gu.y * gu.y;
    const double area = mesh.areas[t];
    const double mu_mean = (mu[tri[0]] + mu[tri[1]] + mu[tri[2]]) / 3.0;
    const double fp = power_flux(g2, p);
    const double fq = power_flux(g2, q);
    out.grad_p += area * (fp * g2) / p;
    out.grad_q += (area * mu_mean) * (fq * g2) / q;
    if (grad) {
      const auto& bg = mesh.basis_gradients[t];
      for (int k = 0; k < 3; ++k) {
        const double gdot = gu.x * bg[k].x + gu.y * bg[k].y;
        (*grad)[tri[k]] += area * (fp + mu_mean * fq) * gdot;
      }
    }

    const double jac = 2.0 * area;
    double loc_p = 0.0;
    double loc_q = 0.0;
    double loc_prim = 0.0;
    for (std::size_t g = 0; g < nq; ++g) {
      shape_values(rule.tri_x[g], rule.tri_y[g], lam);
      const double uval = lam[0] * u[tri[0]] + lam[1] * u[tri[1]] + lam[2] * u[tri[2]];
      const double muval = lam[0] * mu[tri[0]] + lam[1] * mu[tri[1]] + lam[2] * mu[tri[2]];
      const Point2 pt = triangle_point(mesh, t, rule.tri_x[g], rule.tri_y[g]);
      const double t2 = uval * uval;
      const double w = rule.tri_w[g];
      loc_p += w * (power_flux(t2, p) * t2);
      loc_q += w * (muval * (power_flux(t2, q) * t2));
      loc_prim += w * truncation_primitive(T, spec, cfg, pt, uval).interior;
      if (grad) {
        const double value_flux =
            T.theta * (power_flux(t2, p) * uval) + muval * (power_flux(t2, q) * uval);
        const double theta_int = truncation_eval(T, spec, cfg, pt, uval).interior;
        const double c = jac * w * (value_flux - theta_int);
        for (int k = 0; k < 3; ++k) (*grad)[tri[k]] += c * lam[k];
      }
    }
    out.val_p += jac * (T.theta / p) * loc_p;
    out.val_q += jac * loc_q / q;
    out.interior_primitive += jac * loc_prim;
  }

  const std::size_t ne = rule.edge_size();
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& edge = mesh.boundary_edges[e];
    double loc = 0.0;
    for (std::size_t g = 0; g < ne; ++g) {
      const double s = rule.edge_t[g];
      const double tr = (1.0 - s) * u[edge.a] + s * u[edge.b];
      const Point2 pt = edge_point(mesh, e, s);
      const double w = rule.edge_w[g];
      loc += w * truncation_primitive(T, spec, cfg, pt, tr).boundary;
      if (grad) {
        const double theta_bd = truncation_eval(T, spec, cfg, pt, tr).boundary;
        const double c = edge.length * w * (-theta_bd);
        (*grad)[edge.a] += c * (1.0 - s);
        (*grad)[edge.b] += c * s;
      }
    }
    out.boundary_primitive += edge.length * loc;
  }

  out.total = ((out.grad_p + out.grad_q) + (out.val_p + out.val_q)) -
              (out.interior_primitive + out.boundary_primitive);
  return out;
}

}  // namespace

EnergyBreakdown energy(const FemFunction& u, const TruncationSet& T, const NonlinearitySpec& spec,
                       const ExponentConfig& cfg, const WeightField& mu, const Mesh& mesh,
                       const QuadratureRule& rule) {
  return energy_impl(u, T, spec, cfg, mu, mesh, rule, nullptr);
}

std::vector<double> energy_gradient(const FemFunction& u, const TruncationSet& T,
                                    const NonlinearitySpec& spec, const ExponentConfig& cfg,
                                    const WeightField& mu, const Mesh& mesh,
                                    const QuadratureRule& rule) {
  std::vector<double> grad;
  energy_impl(u, T, spec, cfg, mu, mesh, rule, &grad);
  return grad;
}

std::vector<double> untruncated_residual(const FemFunction& u, const TruncationSet& T,
                                         const NonlinearitySpec& spec, const ExponentConfig& cfg,
                                         const WeightField& mu, const Mesh& mesh,
                                         const QuadratureRule& rule) {
  if (u.size() != mesh.vertex_count())
    throw std::invalid_argument("untruncated_residual: coefficient/vertex count mismatch");
  std::vector<double> r(mesh.vertex_count(), 0.0);
  const double p = cfg.p;
  const double q = cfg.q;
  const bool steklov = T.kind == TruncationKind::steklov;
  const std::size_t nq = rule.tri_size();
  double lam[3];

  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& bg = mesh.basis_gradients[t];
    const Point2 gu = triangle_gradient(mesh, u, t);
    const double g2 = gu.x * gu.x + gu.y * gu.y;
    const double area = mesh.areas[t];
    const double mu_mean = (mu[tri[0]] + mu[tri[1]] + mu[tri[2]]) / 3.0;
    const double flux = power_flux(g2, p) + mu_mean * power_flux(g2, q);
    for (int k = 0; k < 3; ++k)
      r[tri[k]] += area * flux * (gu.x * bg[k].x + gu.y * bg[k].y);

    const double jac = 2.0 * area;
    for (std::size_t g = 0; g < nq; ++g) {
      shape_values(rule.tri_x[g], rule.tri_y[g], lam);
      const double uval = lam[0] * u[tri[0]] + lam[1] * u[tri[1]] + lam[2] * u[tri[2]];
      const double muval = lam[0] * mu[tri[0]] + lam[1] * mu[tri[1]] + lam[2] * mu[tri[2]];
      const Point2 pt = triangle_point(mesh, t, rule.tri_x[g], rule.tri_y[g]);
      const double sp = signed_power(uval, p);
      const double fval = evaluate_f(spec, pt, uval, gu);
      const double modular_part = T.theta * sp + muval * signed_power(uval, q);
      // Interior reaction of the target problem, moved to the left-hand side.
      const double reaction = steklov ? fval : fval - T.zeta * sp;
      const double c = jac * rule.tri_w[g] * (modular_part + reaction);
      for (int k = 0; k < 3; ++k) r[tri[k]] += c * lam[k];
    }
  }

  const std::size_t ne = rule.edge_size();
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& edge = mesh.boundary_edges[e];
    for (std::size_t g = 0; g < ne; ++g) {
      const double s = rule.edge_t[g];
      const double tr = (1.0 - s) * u[edge.a] + s * u[edge.b];
      const Point2 pt = edge_point(mesh, e, s);
      const double sp = signed_power(tr, p);
      const double bd =
          steklov ? -(T.zeta * sp - evaluate_g(spec, pt, tr)) : T.beta * sp;
      const double c = edge.length * rule.edge_w[g] * bd;
      r[edge.a] += c * (1.0 - s);
      r[edge.b] += c * s;
    }
  }
  return r;
}

SmallTSearch small_t_search(const TruncationSet& T, const NonlinearitySpec& spec,
                            const ExponentConfig& cfg, const WeightField& mu, const Mesh& mesh,
                            const QuadratureRule& rule, const FemFunction& eigenfunction,
                            int max_k) {
  const double sgn = T.sign == TruncationSign::plus ? 1.0 : -1.0;
  FemFunction v(eigenfunction.size());
  SmallTSearch out;
  for (int k = 0; k <= max_k; ++k) {
    const double t = std::ldexp(1.0, -k);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = sgn * t * eigenfunction[i];
    const double value = energy(v, T, spec, cfg, mu, mesh, rule).total;
    if (value < 0.0) {
      out.found = true;
      out.k = k;
      out.t = t;
      out.energy = value;
      return out;
    }
  }
  return out;
}

namespace {

struct StartOutcome {
  std::string name;
  DescentResult result;
};

}  // namespace

MinimizeResult minimize_energy(const TruncationSet& T, const NonlinearitySpec& spec,
                               const ExponentConfig& cfg, const WeightField& mu, const Mesh& mesh,
                               const QuadratureRule& rule, const FemFunction& eigenfunction,
                               const MinimizeOptions& opts) {
  const std::size_t n = mesh.vertex_count();
  if (eigenfunction.size() != n)
    throw std::invalid_argument("minimize_energy: eigenfunction/vertex count mismatch");
  const bool plus = T.sign == TruncationSign::plus;
  const double sgn = plus ? 1.0 : -1.0;

  Objective obj = [&](const std::vector<double>& x, std::vector<double>& g) {
    FemFunction u;
    u.coeffs = x;
    return energy_impl(u, T, spec, cfg, mu, mesh, rule, &g).total;
  };

  const SmallTSearch ladder = small_t_search(T, spec, cfg, mu, mesh, rule, eigenfunction);
  const double t_eig = ladder.found ? ladder.t : std::ldexp(1.0, -26);

  std::vector<std::pair<std::string, std::vector<double>>> starts;
  starts.emplace_back("perturbation", std::vector<double>(n, sgn * 0.01));
  {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = sgn * t_eig * eigenfunction[i];
    starts.emplace_back("eigenfunction", std::move(x));
  }
  {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> dist(0.0, T.upper);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = sgn * dist(rng);
    starts.emplace_back("random", std::move(x));
  }

  DescentOptions dopts;
  dopts.max_iterations = opts.max_iterations;
  dopts.gradient_tolerance = opts.gradient_tolerance;

  bool have_best = false;
  StartOutcome best;
  for (auto& [name, x0] : starts) {
    DescentResult res = minimize_descent(obj, x0, dopts);
    const bool better =
        !have_best || res.value < best.result.value ||
        (res.value == best.result.value && res.gradient_norm < best.result.gradient_norm);
    if (better) {
      best.name = name;
      best.result = std::move(res);
      have_best = true;
    }
  }

  MinimizeResult out;
  out.minimizer.coeffs = best.result.x;
  out.breakdown = energy(out.minimizer, T, spec, cfg, mu, mesh, rule);
  out.certificate.nontrivial = out.breakdown.total < 0.0;
  out.certificate.residual = best.result.gradient_norm;
  out.certificate.iterations = best.result.iterations;
  out.certificate.winning_start = best.name;
  out.certificate.small_t = t_eig;

  if (opts.require_negative_energy && !out.certificate.nontrivial) {
    std::ostringstream msg;
    msg << "minimize_energy: failed nontriviality; best energy " << out.breakdown.total
        << " from start '" << best.name << "'";
    throw std::runtime_error(msg.str());
  }
  return out;
}

SignReport verify_constant_sign(const FemFunction& u, const TruncationSet& T,
                                const NonlinearitySpec& spec, const ExponentConfig& cfg,
                                const WeightField& mu, const Mesh& mesh,
                                const QuadratureRule& rule, double sign_tol, double residual_tol) {
  if (u.size() == 0) throw std::invalid_argument("verify_constant_sign: empty function");
  SignReport rep;
  const auto [lo, hi] = std::minmax_element(u.coeffs.begin(), u.coeffs.end());
  rep.min_value = *lo;
  rep.max_value = *hi;
  const bool plus = T.sign == TruncationSign::plus;
  rep.bounds_ok = plus ? (rep.min_value >= -sign_tol && rep.max_value <= T.upper + sign_tol)
                       : (rep.min_value >= T.lower - sign_tol && rep.max_value <= sign_tol);

  const FemFunction wrong = plus ? neg_part(u) : pos_part(u);
  rep.wrong_sign_modular = modular_full(wrong, cfg, mu, mesh, rule).total;
  rep.sign_pure = rep.wrong_sign_modular <= sign_tol;

  const std::vector<double> res = untruncated_residual(u, T, spec, cfg, mu, mesh, rule);
  double norm = 0.0;
  for (double v : res) norm = std::max(norm, std::abs(v));
  rep.untruncated_residual_norm = norm;
  rep.residual_ok = norm <= residual_tol;
  return rep;
}

}  // namespace dp
