#pragma once

#include <vector>

#include "dphase/mesh.hpp"
#include "dphase/space.hpp"

namespace dp {

/// One summand a |s|^{r-2} s with exponent r > 1.
struct PowerTerm {
  double coefficient = 0.0;
  double exponent = 2.0;
};

/// One summand b |xi|^gamma of a gradient-dependent reaction.
struct GradientTerm {
  double coefficient = 0.0;
  double exponent = 1.0;
};

/// Declared growth bounds: |f| <= a1 |xi|^{p(r1-1)/r1} + a2 |s|^{r1-1} + alpha1
/// and |g| <= a3 |s|^{r2-1} + alpha2, plus the sign-paired bounds
/// f s <= b1 |xi|^p + b2 |s|^p + omega1 and g s <= b3 |s|^p + omega2,
/// with omega1, omega2 taken as nonnegative constants.
struct GrowthMetadata {
  double r1 = 2.0;
  double r2 = 2.0;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0;
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;
  double omega1 = 0.0, omega2 = 0.0;
};

/// Closed-form reaction pair: f(x, s, xi) over the interior as a sum of power
/// terms, gradient-power terms and a constant; g(x, s) on the boundary as
/// power terms and a constant.
struct NonlinearitySpec {
  std::vector<PowerTerm> interior_powers;
  std::vector<GradientTerm> interior_gradients;
  double interior_constant = 0.0;  // realizes f(x,0,0) != 0
  std::vector<PowerTerm> boundary_powers;
  double boundary_constant = 0.0;
  GrowthMetadata growth;
};

/// Growth gate: verifies symbolically that the declared metadata dominates the
/// term list (term exponents at most r - 1, gradient exponents at most
/// p(r1-1)/r1, coefficient sums below a_i, constants below alpha_i) and that
/// r1, r2 sit inside the subcritical range. Throws on any violation.
void validate_growth(const NonlinearitySpec& spec, const ExponentConfig& cfg);

double evaluate_f(const NonlinearitySpec& spec, const Point2& x, double s, const Point2& xi);
double evaluate_g(const NonlinearitySpec& spec, const Point2& x, double s);

/// Analytic primitives: F(x,s) integrates f in s from 0 (gradient terms have
/// no s-dependence and contribute nothing), G likewise for g.
double primitive_F(const NonlinearitySpec& spec, const Point2& x, double s);
double primitive_G(const NonlinearitySpec& spec, const Point2& x, double s);

/// True when f(s)/|s|^{q-2}s -> +infinity for s -> +-infinity can be read off
/// the terms: pure powers with positive coefficients, no gradient terms, no
/// constant, and the leading exponent above q.
bool superlinear_interior(const NonlinearitySpec& spec, const ExponentConfig& cfg);
bool superlinear_boundary(const NonlinearitySpec& spec, const ExponentConfig& cfg);

/// True when f(s)/|s|^{e-2}s -> 0 for s -> 0: no constant term and every
/// power exponent above e.
bool interior_vanishes_at_zero(const NonlinearitySpec& spec, double e);
bool boundary_vanishes_at_zero(const NonlinearitySpec& spec, double e);

}  // namespace dp
