#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dphase/convection.hpp"
#include "dphase/eigenpair.hpp"
#include "dphase/linear_oracle.hpp"
#include "dphase/mesh.hpp"
#include "dphase/operators.hpp"
#include "dphase/space.hpp"
#include "dphase/truncation.hpp"
#include "dphase/variational.hpp"

namespace dp::acceptance {

namespace {

struct Criterion {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    detail += detail.empty() ? why : "; " + why;
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

FemFunction random_function(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  FemFunction u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = dist(rng);
  return u;
}

/// First-eigenfunction positivity is an interior statement; the exact discrete
/// eigenvector of the penalized problem dips below zero at corner nodes on
/// coarse meshes (so does the dense oracle's), vanishing under refinement.
double min_interior_nodal(const FemFunction& u, const Mesh& mesh) {
  std::vector<char> on_boundary(mesh.vertex_count(), 0);
  for (const auto& e : mesh.boundary_edges) on_boundary[e.a] = on_boundary[e.b] = 1;
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!on_boundary[i]) m = std::min(m, u[i]);
  return m;
}

/// f(s) = |s|^{0.2} s, g(s) = |s|^{0.1} s: superlinear odd powers with the
/// exponents q < 2.2 < p* and p < 2.1 < p_* for p = 1.4, q = 1.8.
NonlinearitySpec superlinear_spec(bool with_boundary) {
  NonlinearitySpec spec;
  spec.interior_powers = {{1.0, 2.2}};
  spec.growth.r1 = 2.2;
  spec.growth.a2 = 1.0;
  spec.growth.alpha1 = 1.0;
  if (with_boundary) {
    spec.boundary_powers = {{1.0, 2.1}};
    spec.growth.r2 = 2.1;
    spec.growth.a3 = 1.0;
    spec.growth.alpha2 = 1.0;
  }
  return spec;
}

/// f(x,s,xi) = 1 + 0.05 |xi|^{p(r1-1)/r1} with Young-derived smallness
/// constants: s <= 0.715|s|^p + 0.286 and 0.05|xi|^gamma |s| <=
/// 0.0116|xi|^p + 0.0385(|s|^p + 1), so f s <= b1|xi|^p + b2|s|^p + omega1.
NonlinearitySpec convection_spec(const ExponentConfig& cfg) {
  NonlinearitySpec spec;
  spec.growth.r1 = 1.3;
  spec.interior_constant = 1.0;
  spec.interior_gradients = {{0.05, cfg.p * (spec.growth.r1 - 1.0) / spec.growth.r1}};
  spec.growth.a1 = 0.05;
  spec.growth.alpha1 = 1.0;
  spec.growth.b1 = 0.0116;
  spec.growth.b2 = 0.76;
  spec.growth.b3 = 0.0;
  spec.growth.omega1 = 0.33;
  spec.growth.omega2 = 0.0;
  return spec;
}

Criterion modular_norm_suite() {
  Criterion c;
  const Mesh mesh = build_unit_square_mesh(8);
  const ExponentConfig cfg(1.4, 1.8);
  const WeightField mu = WeightField::linear_x1(mesh);
  const QuadratureRule& rule = default_rule();
  std::mt19937_64 rng(7);
  const double scales[5] = {0.03, 0.3, 1.0, 3.0, 30.0};
  int passes = 0;
  std::string first_failure;
  for (int i = 0; i < 200; ++i) {
    const double s = scales[i % 5];
    const FemFunction u = random_function(rng, mesh.vertex_count(), -s, s);
    const ModularRelationsReport rep = check_modular_norm_relations(u, cfg, mu, mesh, rule);
    if (rep.ok)
      ++passes;
    else if (first_failure.empty())
      first_failure = "function " + std::to_string(i) + " failed clause " + rep.failed_clause;
  }
  if (passes != 200)
    c.fail(std::to_string(200 - passes) + " of 200 functions failed; first: " + first_failure);
  else
    c.detail = "200/200 random functions satisfy clauses (i)-(iv) at 1e-9 slack";
  return c;
}

Criterion eigen_oracle() {
  Criterion c;
  const Mesh mesh = build_unit_square_mesh(16);
  const QuadratureRule& rule = default_rule();
  std::ostringstream os;
  for (const double beta : {1.0, 100.0}) {
    const EigenResult r = robin_first_eigenpair(mesh, 2.0, beta, 1e-10, 50000, rule);
    const LinearEigenOracle o = robin_linear_oracle(mesh, beta);
    const double delta = std::abs(r.lambda - o.lambda) / std::abs(o.lambda);
    if (delta > 1e-6)
      c.fail("robin beta = " + num(beta) + " relative delta " + num(delta));
    if (!(min_interior_nodal(r.eigenfunction, mesh) > 0.0))
      c.fail("robin eigenfunction not interior-positive at beta = " + num(beta) +
             " (interior min " + num(min_interior_nodal(r.eigenfunction, mesh)) + ")");
    os << "robin(beta " << num(beta) << ") delta " << num(delta) << ", ";
  }
  const EigenResult s = steklov_first_eigenpair(mesh, 2.0, 1e-10, 50000, rule);
  const LinearEigenOracle so = steklov_linear_oracle(mesh);
  const double ds = std::abs(s.lambda - so.lambda) / std::abs(so.lambda);
  if (ds > 1e-6) c.fail("steklov relative delta " + num(ds));
  if (!(min_interior_nodal(s.eigenfunction, mesh) > 0.0))
    c.fail("steklov eigenfunction not interior-positive");
  if (c.pass) c.detail = os.str() + "steklov delta " + num(ds);
  return c;
}

Criterion rayleigh_inequalities() {
  Criterion c;
  const Mesh mesh = build_unit_square_mesh(8);
  const double p = 1.4;
  const double beta = 1.0;
  const QuadratureRule& rule = default_rule();
  const double lambda_r = robin_first_eigenpair(mesh, p, beta, 1e-10, 50000, rule).lambda;
  const double lambda_s = steklov_first_eigenpair(mesh, p, 1e-10, 50000, rule).lambda;
  std::mt19937_64 rng(11);
  int violations = 0;
  for (int i = 0; i < 100; ++i) {
    const FemFunction u = random_function(rng, mesh.vertex_count(), -1.0, 1.0);
    if (rayleigh_robin(u, mesh, p, beta, rule) < lambda_r - 1e-8) ++violations;
    if (rayleigh_steklov(u, mesh, p, rule) < lambda_s - 1e-8) ++violations;
  }
  if (violations > 0)
    c.fail(std::to_string(violations) + " quotient values undercut the first eigenvalue");
  else
    c.detail = "100 random quotients dominate lambda_R = " + num(lambda_r) +
               " and lambda_S = " + num(lambda_s);
  return c;
}

Criterion operator_properties() {
  Criterion c;
  const Mesh mesh = build_unit_square_mesh(8);
  const ExponentConfig cfg(1.4, 1.8);
  const WeightField mu = WeightField::linear_x1(mesh);
  const QuadratureRule& rule = default_rule();
  std::mt19937_64 rng(13);
  const double scales[4] = {0.1, 1.0, 5.0, 20.0};
  for (int i = 0; i < 100; ++i) {
    const double s = scales[i % 4];
    const FemFunction u = random_function(rng, mesh.vertex_count(), -s, s);
    if (apply_A(u, u, cfg, mu, mesh, rule) != modular_full(u, cfg, mu, mesh, rule).total) {
      c.fail("pairing <A(u),u> is not bit-identical to the modular at sample " +
             std::to_string(i));
      break;
    }
  }
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const FemFunction u = random_function(rng, mesh.vertex_count(), -1.0, 1.0);
    const FemFunction v = random_function(rng, mesh.vertex_count(), -1.0, 1.0);
    FemFunction d(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) d[k] = u[k] - v[k];
    const double pairing =
        apply_A(u, d, cfg, mu, mesh, rule) - apply_A(v, d, cfg, mu, mesh, rule);
    worst = std::min(worst, pairing);
  }
  if (worst < -1e-12) c.fail("monotonicity pairing dips to " + num(worst));
  if (c.pass)
    c.detail = "100/100 bit-identical pairings, smallest monotonicity value " + num(worst);
  return c;
}

Criterion steklov_reproduction() {
  Criterion c;
  const Mesh mesh = build_unit_square_mesh(16);
  const ExponentConfig cfg(1.4, 1.8);
  const WeightField mu = WeightField::linear_x1(mesh);
  const QuadratureRule& rule = default_rule();
  const NonlinearitySpec spec = superlinear_spec(true);
  validate_growth(spec, cfg);
  if (!superlinear_interior(spec, cfg) || !superlinear_boundary(spec, cfg) ||
      !interior_vanishes_at_zero(spec, cfg.q) || !boundary_vanishes_at_zero(spec, cfg.p))
    c.fail("hypothesis checker rejected the reactions");

  const EigenResult S = steklov_first_eigenpair(mesh, cfg.p, 1e-9, 50000, rule);
  const double zeta = S.lambda + 0.5;
  const TruncationSet plus = make_truncation_set(TruncationKind::steklov, TruncationSign::plus,
                                                 spec, cfg, zeta, 1.0, 1.0);
  const TruncationSet minus = make_truncation_set(TruncationKind::steklov, TruncationSign::minus,
                                                  spec, cfg, zeta, 1.0, 1.0);
  MinimizeOptions mopts;
  const MinimizeResult up =
      minimize_energy(plus, spec, cfg, mu, mesh, rule, S.eigenfunction, mopts);
  mopts.seed = 2;
  const MinimizeResult vm =
      minimize_energy(minus, spec, cfg, mu, mesh, rule, S.eigenfunction, mopts);
  const SignReport su = verify_constant_sign(up.minimizer, plus, spec, cfg, mu, mesh, rule);
  const SignReport sv = verify_constant_sign(vm.minimizer, minus, spec, cfg, mu, mesh, rule);

  if (su.min_value < -1e-8) c.fail("u0 min " + num(su.min_value));
  if (su.max_value > plus.upper + 1e-8) c.fail("u0 max " + num(su.max_value));
  if (!(up.breakdown.total < 0.0)) c.fail("u0 energy " + num(up.breakdown.total) + " not < 0");
  if (su.untruncated_residual_norm > 1e-6)
    c.fail("u0 residual " + num(su.untruncated_residual_norm));
  if (sv.max_value > 1e-8) c.fail("v0 max " + num(sv.max_value));
  if (sv.min_value < minus.lower - 1e-8) c.fail("v0 min " + num(sv.min_value));
  if (!(vm.breakdown.total < 0.0)) c.fail("v0 energy " + num(vm.breakdown.total) + " not < 0");
  if (sv.untruncated_residual_norm > 1e-6)
    c.fail("v0 residual " + num(sv.untruncated_residual_norm));
  double sym = 0.0;
  for (std::size_t i = 0; i < up.minimizer.size(); ++i)
    sym = std::max(sym, std::abs(up.minimizer[i] + vm.minimizer[i]));
  if (sym > 1e-6) c.fail("odd symmetry defect " + num(sym));
  if (c.pass)
    c.detail = "zeta = " + num(zeta) + ", energies " + num(up.breakdown.total) + " / " +
               num(vm.breakdown.total) + ", residuals " + num(su.untruncated_residual_norm) +
               " / " + num(sv.untruncated_residual_norm) + ", symmetry " + num(sym);
  return c;
}

Criterion robin_reproduction() {
  Criterion c;
  const Mesh mesh = build_unit_square_mesh(16);
  const ExponentConfig cfg(1.4, 1.8);
  const WeightField mu = WeightField::linear_x1(mesh);
  const QuadratureRule& rule = default_rule();
  const NonlinearitySpec spec = superlinear_spec(false);
  validate_growth(spec, cfg);
  if (!superlinear_interior(spec, cfg) || !interior_vanishes_at_zero(spec, cfg.p))
    c.fail("hypothesis checker rejected the reaction");

  const double beta = 1.0;
  const double theta = 1.0;
  const EigenResult R = robin_first_eigenpair(mesh, cfg.p, beta, 1e-9, 50000, rule);
  const double zeta = R.lambda + theta + 0.5;
  const TruncationSet plus = make_truncation_set(TruncationKind::robin, TruncationSign::plus,
                                                 spec, cfg, zeta, beta, theta);
  const TruncationSet minus = make_truncation_set(TruncationKind::robin, TruncationSign::minus,
                                                  spec, cfg, zeta, beta, theta);

  const SmallTSearch ladder = small_t_search(plus, spec, cfg, mu, mesh, rule, R.eigenfunction);
  if (!ladder.found || ladder.k > 26)
    c.fail("dyadic search found no negative energy by k = 26");

  MinimizeOptions mopts;
  const MinimizeResult up =
      minimize_energy(plus, spec, cfg, mu, mesh, rule, R.eigenfunction, mopts);
  mopts.seed = 2;
  const MinimizeResult vm =
      minimize_energy(minus, spec, cfg, mu, mesh, rule, R.eigenfunction, mopts);
  const SignReport su = verify_constant_sign(up.minimizer, plus, spec, cfg, mu, mesh, rule);
  const SignReport sv = verify_constant_sign(vm.minimizer, minus, spec, cfg, mu, mesh, rule);

  if (su.min_value < -1e-8) c.fail("u0 min " + num(su.min_value));
  if (su.max_value > plus.upper + 1e-8) c.fail("u0 max " + num(su.max_value));
  if (!(up.breakdown.total < 0.0)) c.fail("u0 energy " + num(up.breakdown.total) + " not < 0");
  if (su.untruncated_residual_norm > 1e-6)
    c.fail("u0 residual " + num(su.untruncated_residual_norm));
  if (sv.max_value > 1e-8) c.fail("v0 max " + num(sv.max_value));
  if (sv.min_value < minus.lower - 1e-8) c.fail("v0 min " + num(sv.min_value));
  if (!(vm.breakdown.total < 0.0)) c.fail("v0 energy " + num(vm.breakdown.total) + " not < 0");
  if (sv.untruncated_residual_norm > 1e-6)
    c.fail("v0 residual " + num(sv.untruncated_residual_norm));
  if (c.pass)
    c.detail = "zeta = " + num(zeta) + ", ladder k = " + std::to_string(ladder.k) +
               ", energies " + num(up.breakdown.total) + " / " + num(vm.breakdown.total) +
               ", residuals " + num(su.untruncated_residual_norm) + " / " +
               num(sv.untruncated_residual_norm);
  return c;
}

Criterion convection_reproduction() {
  Criterion c;
  const Mesh mesh = build_unit_square_mesh(16);
  const ExponentConfig cfg(1.4, 1.8);
  const WeightField mu = WeightField::linear_x1(mesh);
  const QuadratureRule& rule = default_rule();
  const NonlinearitySpec spec = convection_spec(cfg);
  validate_growth(spec, cfg);
  const double zeta = 1.0;
  const double beta = 1.0;
  const double lambda_r = robin_first_eigenpair(mesh, cfg.p, beta, 1e-9, 50000, rule).lambda;
  const double lambda_s = steklov_first_eigenpair(mesh, cfg.p, 1e-9, 50000, rule).lambda;

  PicardOptions opts;
  const ConvectionResult res =
      solve_convection(mesh, cfg, mu, spec, zeta, beta, lambda_r, lambda_s, opts, rule);
  if (!res.certified || !res.conditions.condA)
    c.fail("condition (A) did not certify the run");
  if (!res.converged) c.fail("picard did not converge");
  const double step = res.trace.empty() ? 1.0 : res.trace.back().step_norm;
  if (!(step < 1e-8)) c.fail("final step norm " + num(step));
  if (res.residual_norm > 1e-6) c.fail("weak residual " + num(res.residual_norm));
  const double norm0 = luxemburg_norm(res.solution, cfg, mu, mesh, rule);
  if (!(norm0 > 1e-3)) c.fail("solution norm " + num(norm0) + " not above 1e-3");

  NonlinearitySpec bad = spec;
  bad.growth.b1 = 1.2;
  bad.growth.b2 = 0.5;
  bad.growth.b3 = 2.0;
  bool rejected = false;
  try {
    solve_convection(mesh, cfg, mu, bad, 0.1, beta, lambda_r, lambda_s, opts, rule);
  } catch (const std::exception& e) {
    rejected = std::string(e.what()).find("condition gate") != std::string::npos;
  }
  if (!rejected) c.fail("violating parameter set was not rejected by the gate");
  if (c.pass)
    c.detail = "slacks A = " + num(res.conditions.slackA1) + " / " +
               num(res.conditions.slackA2) + ", " + std::to_string(res.outer_iterations) +
               " outer steps, residual " + num(res.residual_norm) + ", norm " + num(norm0) +
               ", violating set rejected";
  return c;
}

/// Directional derivative versus central difference, both at step 1e-6.
double directional_mismatch(const std::function<double(const FemFunction&, std::vector<double>*)>& f,
                            const FemFunction& u, const std::vector<double>& d) {
  std::vector<double> grad;
  f(u, &grad);
  double analytic = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) analytic += grad[i] * d[i];
  const double h = 1e-6;
  FemFunction up = u;
  FemFunction um = u;
  for (std::size_t i = 0; i < d.size(); ++i) {
    up[i] += h * d[i];
    um[i] -= h * d[i];
  }
  const double fd = (f(up, nullptr) - f(um, nullptr)) / (2.0 * h);
  return std::abs(analytic - fd) / std::max(1e-8, std::abs(fd));
}

Criterion gradient_checks() {
  Criterion c;
  const Mesh mesh = build_unit_square_mesh(6);
  const ExponentConfig cfg(1.4, 1.8);
  const WeightField mu = WeightField::linear_x1(mesh);
  const QuadratureRule& rule = default_rule();
  std::mt19937_64 rng(17);

  const NonlinearitySpec steklov_set = superlinear_spec(true);
  const NonlinearitySpec robin_set = superlinear_spec(false);
  struct Functional {
    const char* name;
    TruncationSet T;
    const NonlinearitySpec* spec;
  };
  const double zeta = 1.0;
  std::vector<Functional> functionals = {
      {"Gamma+", make_truncation_set(TruncationKind::steklov, TruncationSign::plus, steklov_set,
                                     cfg, zeta, 1.0, 1.0), &steklov_set},
      {"Gamma-", make_truncation_set(TruncationKind::steklov, TruncationSign::minus, steklov_set,
                                     cfg, zeta, 1.0, 1.0), &steklov_set},
      {"Pi+", make_truncation_set(TruncationKind::robin, TruncationSign::plus, robin_set, cfg,
                                  zeta, 1.0, 1.0), &robin_set},
      {"Pi-", make_truncation_set(TruncationKind::robin, TruncationSign::minus, robin_set, cfg,
                                  zeta, 1.0, 1.0), &robin_set},
  };
  double worst = 0.0;
  for (const Functional& fn : functionals) {
    // sample strictly inside a smooth branch: the cut-offs kink at 0 and at
    // the bounds, so nodal values stay in (0.05, 0.9 upper) on the plus side
    const bool plus = fn.T.sign == TruncationSign::plus;
    for (int i = 0; i < 20; ++i) {
      FemFunction u = plus ? random_function(rng, mesh.vertex_count(), 0.05, 0.9 * fn.T.upper)
                           : random_function(rng, mesh.vertex_count(), 0.9 * fn.T.lower, -0.05);
      std::vector<double> d(u.size());
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      for (auto& x : d) x = dist(rng);
      const double rel = directional_mismatch(
          [&](const FemFunction& v, std::vector<double>* grad) {
            if (!grad) return energy(v, fn.T, *fn.spec, cfg, mu, mesh, rule).total;
            *grad = energy_gradient(v, fn.T, *fn.spec, cfg, mu, mesh, rule);
            return 0.0;
          },
          u, d);
      worst = std::max(worst, rel);
      if (rel > 1e-5) {
        c.fail(std::string(fn.name) + " mismatch " + num(rel) + " at sample " +
               std::to_string(i));
        break;
      }
    }
  }

  const NonlinearitySpec conv = convection_spec(cfg);
  for (int i = 0; i < 20; ++i) {
    const FemFunction u = random_function(rng, mesh.vertex_count(), 0.1, 1.0);
    const FemFunction w = random_function(rng, mesh.vertex_count(), 0.1, 1.0);
    std::vector<double> d(u.size());
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& x : d) x = dist(rng);
    const double rel = directional_mismatch(
        [&](const FemFunction& v, std::vector<double>* grad) {
          return picard_inner_energy(v, w, cfg, mu, mesh, rule, conv, 1.0, grad);
        },
        u, d);
    worst = std::max(worst, rel);
    if (rel > 1e-5) {
      c.fail("inner energy mismatch " + num(rel) + " at sample " + std::to_string(i));
      break;
    }
  }
  if (c.pass)
    c.detail = "20 points per functional, worst relative mismatch " + num(worst);
  return c;
}

Criterion coercivity_certificates() {
  Criterion c;
  const Mesh mesh = build_unit_square_mesh(8);
  const ExponentConfig cfg(1.4, 1.8);
  const WeightField mu = WeightField::linear_x1(mesh);
  const QuadratureRule& rule = default_rule();
  const NonlinearitySpec spec = convection_spec(cfg);
  const GrowthMetadata& gm = spec.growth;
  const double zeta = 1.0;
  const double beta = 1.0;
  const double lambda_r = robin_first_eigenpair(mesh, cfg.p, beta, 1e-9, 50000, rule).lambda;
  const double lambda_s = steklov_first_eigenpair(mesh, cfg.p, 1e-9, 50000, rule).lambda;
  const ConditionReport rep =
      check_conditions(gm.b1, gm.b2, gm.b3, beta, zeta, lambda_r, lambda_s, 0.0, 0.0);
  if (!rep.condA || !rep.condB) {
    c.fail("scenario does not certify both cases");
    return c;
  }
  const double offset = gm.omega1 * mesh.total_area() + gm.omega2 * mesh.boundary_length();
  std::mt19937_64 rng(19);
  const double targets[5] = {1.5, 3.0, 6.0, 12.0, 24.0};
  double slack_a = 1e300;
  double slack_b = 1e300;
  for (int i = 0; i < 50; ++i) {
    FemFunction u = random_function(rng, mesh.vertex_count(), -1.0, 1.0);
    const double raw = luxemburg_norm(u, cfg, mu, mesh, rule);
    const double scale = targets[i % 5] / raw;
    for (auto& x : u.coeffs) x *= scale;
    const double norm0 = luxemburg_norm(u, cfg, mu, mesh, rule);
    if (!(norm0 > 1.0)) {
      c.fail("sample " + std::to_string(i) + " failed to scale above norm 1");
      break;
    }
    const double lhs = apply_script_A(u, u, cfg, mu, mesh, rule, spec, zeta);
    const double grow = std::pow(norm0, cfg.p);
    slack_a = std::min(slack_a, lhs - (rep.slackA1 * grow - offset));
    slack_b = std::min(slack_b, lhs - (rep.slackB1 * grow - offset));
  }
  if (slack_a < -1e-9) c.fail("case I lower bound violated by " + num(-slack_a));
  if (slack_b < -1e-9) c.fail("case II lower bound violated by " + num(-slack_b));
  if (c.pass)
    c.detail = "50 samples; tightest margins: case I " + num(slack_a) + ", case II " +
               num(slack_b);
  return c;
}

}  // namespace

int run_all(std::ostream& os) {
  struct Entry {
    const char* name;
    Criterion (*fn)();
    double budget_seconds;
  };
  const Entry table[] = {
      {"modular-norm suite", modular_norm_suite, 10.0},
      {"eigenvalue oracle", eigen_oracle, 30.0},
      {"rayleigh inequalities", rayleigh_inequalities, 120.0},
      {"operator properties", operator_properties, 120.0},
      {"steklov two-solution reproduction", steklov_reproduction, 60.0},
      {"robin two-solution reproduction", robin_reproduction, 120.0},
      {"convection reproduction", convection_reproduction, 120.0},
      {"gradient checks", gradient_checks, 120.0},
      {"coercivity certificates", coercivity_certificates, 120.0},
  };
  int failures = 0;
  int index = 0;
  for (const Entry& entry : table) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = entry.fn();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > entry.budget_seconds)
      c.fail("runtime " + num(dt) + " s exceeds the " + num(entry.budget_seconds) + " s budget");
    os << "criterion " << index << " [" << (c.pass ? "PASS" : "FAIL") << "] " << entry.name
       << ": " << c.detail << " (" << num(dt) << " s)\n";
    if (!c.pass) ++failures;
  }
  if (failures == 0)
    os << "acceptance: all 9 criteria passed\n";
  else
    os << "acceptance: " << failures << " of 9 criteria failed\n";
  return failures;
}

}  // namespace dp::acceptance
