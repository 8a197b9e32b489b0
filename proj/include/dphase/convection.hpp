#pragma once

#include <vector>

#include "dphase/fem.hpp"
#include "dphase/nonlinearity.hpp"
#include "dphase/operators.hpp"
#include "dphase/space.hpp"

namespace dp {

enum class ConditionCase { none, A, B };

struct PicardState {
  FemFunction iterate;
  int outer_index = 0;
  double step_norm = 0.0;       // equivalent norm of u^{k+1} - u^k
  double inner_residual = 0.0;  // gradient max-norm reached by the inner solve
  ConditionCase condition_used = ConditionCase::none;
};

struct PicardOptions {
  int max_outer = 200;
  double step_tolerance = 1e-8;
  int max_inner_iterations = 20000;
  double inner_tolerance = 1e-9;
  double damping = 1.0;            // in (0, 1]; halved automatically on divergence
  bool allow_uncertified = false;  // run past a failed gate, never certified
};

struct ConvectionResult {
  FemFunction solution;
  std::vector<PicardState> trace;
  ConditionReport conditions;
  ConditionCase condition_used = ConditionCase::none;
  bool certified = false;
  bool converged = false;
  int outer_iterations = 0;
  double residual_norm = 0.0;  // max nodal residual of the composite operator
  double norm_bound = 0.0;     // a priori bound monitored along certified runs
};

/// Convex combination damping * u_new + (1 - damping) * u_old.
FemFunction damped_update(const FemFunction& u_old, const FemFunction& u_new, double damping);

/// Energy of one inner Picard step with the reactions frozen at w:
///   int (1/p |grad u|^p + mu/q |grad u|^q + 1/p |u|^p + mu/q |u|^q)
///   + (zeta/p) int_bdry |u|^p - int f(x,w,grad w) u - int_bdry g(x,w) u.
/// Strictly convex in u; writes the nodal gradient when grad is non-null.
double picard_inner_energy(const FemFunction& u, const FemFunction& w, const ExponentConfig& cfg,
                           const WeightField& mu, const Mesh& mesh, const QuadratureRule& rule,
                           const NonlinearitySpec& spec, double zeta,
                           std::vector<double>* grad = nullptr);

/// Picard iteration for the gradient-dependent problem: each outer step
/// freezes (u^k, grad u^k) inside f and u^k inside g and minimizes the
/// strictly convex energy
///   int (1/p |grad u|^p + mu/q |grad u|^q + 1/p |u|^p + mu/q |u|^q)
///   + (zeta/p) int_bdry |u|^p - int f(x,u^k,grad u^k) u - int_bdry g(x,u^k) u,
/// so fixed points are exactly the discrete zeros of the composite operator.
/// The gate requires condition (A) or (B); divergence of the step norm over
/// five consecutive outer steps halves the damping, and exhausting the
/// damping raises an error.
ConvectionResult solve_convection(const Mesh& mesh, const ExponentConfig& cfg,
                                  const WeightField& mu, const NonlinearitySpec& spec, double zeta,
                                  double beta, double lambda_robin, double lambda_steklov,
                                  const PicardOptions& opts,
                                  const QuadratureRule& rule = default_rule());

}  // namespace dp
