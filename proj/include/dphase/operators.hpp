#pragma once

#include <vector>

#include "dphase/fem.hpp"
#include "dphase/nonlinearity.hpp"
#include "dphase/space.hpp"

namespace dp {

/// Pairing of the double phase operator with a test function:
/// <A(u), phi> = int (|grad u|^{p-2} grad u + mu |grad u|^{q-2} grad u) . grad phi
///             + int (|u|^{p-2} u + mu |u|^{q-2} u) phi.
/// Shares quadrature and accumulation order with modular_full, so
/// <A(u), u> reproduces the full modular bit for bit.
double apply_A(const FemFunction& u, const FemFunction& phi, const ExponentConfig& cfg,
               const WeightField& mu, const Mesh& mesh, const QuadratureRule& rule);

/// Pairing of the composite operator:
/// <script_A(u), phi> = <A(u), phi> - int f(x, u, grad u) phi
///                    - int_bdry g(x, u) phi + zeta int_bdry |u|^{p-2} u phi.
/// Reduces exactly to apply_A when f = g = 0 and zeta = 0.
double apply_script_A(const FemFunction& u, const FemFunction& phi, const ExponentConfig& cfg,
                      const WeightField& mu, const Mesh& mesh, const QuadratureRule& rule,
                      const NonlinearitySpec& spec, double zeta);

/// Residual vector r_i = <script_A(u), basis_i> over all nodal basis
/// functions; its max-norm is the weak-solution certificate.
std::vector<double> script_A_residual(const FemFunction& u, const ExponentConfig& cfg,
                                      const WeightField& mu, const Mesh& mesh,
                                      const QuadratureRule& rule, const NonlinearitySpec& spec,
                                      double zeta);

/// Slack-valued evaluation of the two coercivity conditions and the
/// Robin-eigenfunction alternative condition.
struct ConditionReport {
  double lambda_robin = 0.0;
  double lambda_steklov = 0.0;
  bool condA = false;
  double slackA1 = 0.0;  // 1 - b1 - b2 / lambda_R
  double slackA2 = 0.0;  // zeta - b2 beta / lambda_R - b3
  bool condB = false;
  double slackB1 = 0.0;  // 1 - max(b1, b2) - b3 / lambda_S
  double slackB2 = 0.0;  // zeta (condition: zeta >= 0)
  bool trace_alternative = false;
  double slack_trace = 0.0;  // (beta + zeta) ||u_R||^p_{p,bdry} - (lambda_R + theta)
};

/// boundary_norm_term is ||u_R||^p_{p, boundary} of the normalized first Robin
/// eigenfunction (||u_R||_p = 1), consumed only by the trace-alternative slack.
ConditionReport check_conditions(double b1, double b2, double b3, double beta, double zeta,
                                 double lambda_robin, double lambda_steklov, double theta,
                                 double boundary_norm_term);

}  // namespace dp
