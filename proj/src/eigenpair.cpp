#include "dphase/eigenpair.hpp"

#include <cmath>
#include <limits>

#include "dphase/descent.hpp"

namespace dp {

double dirichlet_p_energy(const FemFunction& u, const Mesh& mesh, double p,
                          std::vector<double>* grad) {
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const Point2 gu = triangle_gradient(mesh, u, t);
    const double g2 = gu.x * gu.x + gu.y * gu.y;
    const double pf = power_flux(g2, p);
    const double area = mesh.areas[t];
    total += area * (pf * g2);
    if (grad) {
      const auto& tri = mesh.triangles[t];
      const auto& bg = mesh.basis_gradients[t];
      for (int k = 0; k < 3; ++k)
        (*grad)[tri[k]] += area * p * pf * (gu.x * bg[k].x + gu.y * bg[k].y);
    }
  }
  return total;
}

double interior_p_norm(const FemFunction& u, const Mesh& mesh, double p,
                       const QuadratureRule& rule, std::vector<double>* grad) {
  double total = 0.0;
  const std::size_t nq = rule.tri_size();
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double jac = 2.0 * mesh.areas[t];
    double local = 0.0;
    for (std::size_t g = 0; g < nq; ++g) {
      const double x = rule.tri_x[g], y = rule.tri_y[g];
      const double lam0 = 1.0 - x - y;
      const double uval = lam0 * u[tri[0]] + x * u[tri[1]] + y * u[tri[2]];
      const double t2 = uval * uval;
      const double pf = power_flux(t2, p);
      local += rule.tri_w[g] * (pf * t2);
      if (grad) {
        const double c = jac * rule.tri_w[g] * p * pf * uval;
        (*grad)[tri[0]] += c * lam0;
        (*grad)[tri[1]] += c * x;
        (*grad)[tri[2]] += c * y;
      }
    }
    total += jac * local;
  }
  return total;
}

double boundary_p_norm(const FemFunction& u, const Mesh& mesh, double p,
                       const QuadratureRule& rule, std::vector<double>* grad) {
  double total = 0.0;
  const std::size_t nq = rule.edge_size();
  for (const auto& edge : mesh.boundary_edges) {
    double local = 0.0;
    for (std::size_t g = 0; g < nq; ++g) {
      const double s = rule.edge_t[g];
      const double uval = (1.0 - s) * u[edge.a] + s * u[edge.b];
      const double t2 = uval * uval;
      const double pf = power_flux(t2, p);
      local += rule.edge_w[g] * (pf * t2);
      if (grad) {
        const double c = edge.length * rule.edge_w[g] * p * pf * uval;
        (*grad)[edge.a] += c * (1.0 - s);
        (*grad)[edge.b] += c * s;
      }
    }
    total += edge.length * local;
  }
  return total;
}

double rayleigh_robin(const FemFunction& u, const Mesh& mesh, double p, double beta,
                      const QuadratureRule& rule) {
  double den = interior_p_norm(u, mesh, p, rule);
  if (den <= 0.0) throw std::invalid_argument("rayleigh_robin: zero denominator");
  return (dirichlet_p_energy(u, mesh, p) + beta * boundary_p_norm(u, mesh, p, rule)) / den;
}

double rayleigh_steklov(const FemFunction& u, const Mesh& mesh, double p,
                        const QuadratureRule& rule) {
  double den = boundary_p_norm(u, mesh, p, rule);
  if (den <= 0.0) throw std::invalid_argument("rayleigh_steklov: zero denominator");
  return (dirichlet_p_energy(u, mesh, p) + interior_p_norm(u, mesh, p, rule)) / den;
}

namespace {

EigenResult minimize_quotient(const Mesh& mesh, double p, double beta, bool steklov, double tol,
                              int max_iterations, const QuadratureRule& rule) {
  const std::size_t n = mesh.vertex_count();

  // numerator/denominator split of the quotient; denominator also defines the
  // normalization the projection maintains
  auto evaluate = [&](const std::vector<double>& x, std::vector<double>& g_num,
                      std::vector<double>& g_den, double& num, double& den) {
    FemFunction u;
    u.coeffs = x;
    g_num.assign(n, 0.0);
    g_den.assign(n, 0.0);
    if (steklov) {
      num = dirichlet_p_energy(u, mesh, p, &g_num) + interior_p_norm(u, mesh, p, rule, &g_num);
      den = boundary_p_norm(u, mesh, p, rule, &g_den);
    } else {
      num = dirichlet_p_energy(u, mesh, p, &g_num);
      std::vector<double> g_b(n, 0.0);
      num += beta * boundary_p_norm(u, mesh, p, rule, &g_b);
      vec::axpy(beta, g_b, g_num);
      den = interior_p_norm(u, mesh, p, rule, &g_den);
    }
  };

  std::vector<double> g_num(n), g_den(n);
  Objective quotient = [&](const std::vector<double>& x, std::vector<double>& grad) {
    double num, den;
    evaluate(x, g_num, g_den, num, den);
    if (!(den > 0.0) || !std::isfinite(den) || !std::isfinite(num)) {
      grad.assign(n, 0.0);
      return std::numeric_limits<double>::infinity();
    }
    double r = num / den;
    for (std::size_t i = 0; i < n; ++i) grad[i] = (g_num[i] - r * g_den[i]) / den;
    return r;
  };

  Projection renormalize = [&](std::vector<double>& x) {
    FemFunction u;
    u.coeffs = x;
    double den = steklov ? boundary_p_norm(u, mesh, p, rule) : interior_p_norm(u, mesh, p, rule);
    if (den > 0.0 && std::isfinite(den)) {
      double scale = std::pow(den, 1.0 / p);
      for (double& v : x) v /= scale;
    }
  };

  DescentOptions opts;
  opts.max_iterations = max_iterations;
  opts.gradient_tolerance = tol;
  opts.history = 10;
  DescentResult dr = minimize_descent(quotient, std::vector<double>(n, 1.0), opts, renormalize);

  EigenResult result;
  result.normalization = steklov ? EigenNormalization::steklov : EigenNormalization::robin;
  result.eigenfunction.coeffs = dr.x;
  result.lambda = dr.value;
  result.iterations = dr.iterations;
  result.residual = dr.gradient_norm;

  // eigenfunctions are defined up to sign; fix the mean to be positive
  double mean = 0.0;
  for (double v : result.eigenfunction.coeffs) mean += v;
  if (mean < 0.0)
    for (double& v : result.eigenfunction.coeffs) v = -v;

  if (!dr.converged && !dr.line_search_failed) {
    throw EigenConvergenceError(
        std::string(steklov ? "steklov" : "robin") +
            "_first_eigenpair: no convergence after " + std::to_string(dr.iterations) +
            " iterations (residual " + std::to_string(dr.gradient_norm) + ")",
        result);
  }
  return result;
}

}  // namespace

EigenResult robin_first_eigenpair(const Mesh& mesh, double p, double beta, double tol,
                                  int max_iterations, const QuadratureRule& rule) {
  if (!(p > 1.0)) throw std::invalid_argument("robin_first_eigenpair: requires p > 1");
  if (!(beta > 0.0)) throw std::invalid_argument("robin_first_eigenpair: requires beta > 0");
  return minimize_quotient(mesh, p, beta, false, tol, max_iterations, rule);
}

EigenResult steklov_first_eigenpair(const Mesh& mesh, double p, double tol, int max_iterations,
                                    const QuadratureRule& rule) {
  if (!(p > 1.0)) throw std::invalid_argument("steklov_first_eigenpair: requires p > 1");
  if (mesh.boundary_edges.empty())
    throw std::invalid_argument("steklov_first_eigenpair: mesh has no boundary");
  return minimize_quotient(mesh, p, 0.0, true, tol, max_iterations, rule);
}

}  // namespace dp
