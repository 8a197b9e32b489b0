#include "dphase/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dp {

namespace {

void check_power_terms(const std::vector<PowerTerm>& terms, double r_cap, double coeff_cap,
                       const char* where) {
  double coeff_sum = 0.0;
  for (const auto& term : terms) {
    if (!(term.exponent > 1.0))
      throw std::invalid_argument(std::string("NonlinearitySpec: ") + where +
                                  " power exponent must exceed 1");
    if (term.exponent > r_cap)
      throw std::invalid_argument(std::string("NonlinearitySpec: ") + where + " power exponent " +
                                  std::to_string(term.exponent) +
                                  " exceeds the declared growth exponent " +
                                  std::to_string(r_cap));
    coeff_sum += std::abs(term.coefficient);
  }
  if (coeff_sum > coeff_cap)
    throw std::invalid_argument(std::string("NonlinearitySpec: ") + where +
                                " coefficient sum exceeds the declared growth coefficient");
}

}  // namespace

void validate_growth(const NonlinearitySpec& spec, const ExponentConfig& cfg) {
  const GrowthMetadata& gr = spec.growth;
  if (!(gr.r1 > 1.0) || !(gr.r1 < cfg.p_star()))
    throw std::invalid_argument("NonlinearitySpec: r1 must lie in (1, p*)");
  if (!(gr.r2 > 1.0) || !(gr.r2 < cfg.p_lower_star()))
    throw std::invalid_argument("NonlinearitySpec: r2 must lie in (1, p_*)");

  check_power_terms(spec.interior_powers, gr.r1, gr.a2, "interior");
  check_power_terms(spec.boundary_powers, gr.r2, gr.a3, "boundary");

  const double gamma_cap = cfg.p * (gr.r1 - 1.0) / gr.r1;
  double grad_coeff_sum = 0.0;
  for (const auto& term : spec.interior_gradients) {
    if (!(term.exponent > 0.0))
      throw std::invalid_argument("NonlinearitySpec: gradient exponent must be positive");
    if (term.exponent > gamma_cap + 1e-14)
      throw std::invalid_argument("NonlinearitySpec: gradient exponent " +
                                  std::to_string(term.exponent) + " exceeds p(r1-1)/r1 = " +
                                  std::to_string(gamma_cap));
    grad_coeff_sum += std::abs(term.coefficient);
  }
  if (grad_coeff_sum > gr.a1)
    throw std::invalid_argument(
        "NonlinearitySpec: gradient coefficient sum exceeds the declared a1");

  double interior_const_need = std::abs(spec.interior_constant);
  for (const auto& term : spec.interior_powers) interior_const_need += std::abs(term.coefficient);
  if (interior_const_need > gr.alpha1)
    throw std::invalid_argument("NonlinearitySpec: alpha1 does not cover the interior terms");
  double boundary_const_need = std::abs(spec.boundary_constant);
  for (const auto& term : spec.boundary_powers) boundary_const_need += std::abs(term.coefficient);
  if (boundary_const_need > gr.alpha2)
    throw std::invalid_argument("NonlinearitySpec: alpha2 does not cover the boundary terms");

  for (double w : {gr.omega1, gr.omega2})
    if (w < 0.0) throw std::invalid_argument("NonlinearitySpec: omega bounds must be nonnegative");
}

double evaluate_f(const NonlinearitySpec& spec, const Point2&, double s, const Point2& xi) {
  double v = spec.interior_constant;
  for (const auto& term : spec.interior_powers) v += term.coefficient * signed_power(s, term.exponent);
  if (!spec.interior_gradients.empty()) {
    const double mag = std::hypot(xi.x, xi.y);
    for (const auto& term : spec.interior_gradients)
      v += term.coefficient * std::pow(mag, term.exponent);
  }
  return v;
}

double evaluate_g(const NonlinearitySpec& spec, const Point2&, double s) {
  double v = spec.boundary_constant;
  for (const auto& term : spec.boundary_powers) v += term.coefficient * signed_power(s, term.exponent);
  return v;
}

double primitive_F(const NonlinearitySpec& spec, const Point2&, double s) {
  double v = spec.interior_constant * s;
  for (const auto& term : spec.interior_powers)
    v += term.coefficient / term.exponent * std::pow(std::abs(s), term.exponent);
  return v;
}

double primitive_G(const NonlinearitySpec& spec, const Point2&, double s) {
  double v = spec.boundary_constant * s;
  for (const auto& term : spec.boundary_powers)
    v += term.coefficient / term.exponent * std::pow(std::abs(s), term.exponent);
  return v;
}

namespace {

bool superlinear_terms(const std::vector<PowerTerm>& terms, double q) {
  // positive pure powers keep f(s)s >= a |s|^r per term, so the flag demands
  // every coefficient positive and the leading exponent above q
  if (terms.empty()) return false;
  double lead = 0.0;
  for (const auto& term : terms) {
    if (!(term.coefficient > 0.0)) return false;
    lead = std::max(lead, term.exponent);
  }
  return lead > q;
}

}  // namespace

bool superlinear_interior(const NonlinearitySpec& spec, const ExponentConfig& cfg) {
  if (!spec.interior_gradients.empty() || spec.interior_constant != 0.0) return false;
  return superlinear_terms(spec.interior_powers, cfg.q);
}

bool superlinear_boundary(const NonlinearitySpec& spec, const ExponentConfig& cfg) {
  if (spec.boundary_constant != 0.0) return false;
  return superlinear_terms(spec.boundary_powers, cfg.q);
}

bool interior_vanishes_at_zero(const NonlinearitySpec& spec, double e) {
  if (spec.interior_constant != 0.0) return false;
  for (const auto& term : spec.interior_powers)
    if (!(term.exponent > e)) return false;
  return true;
}

bool boundary_vanishes_at_zero(const NonlinearitySpec& spec, double e) {
  if (spec.boundary_constant != 0.0) return false;
  for (const auto& term : spec.boundary_powers)
    if (!(term.exponent > e)) return false;
  return true;
}

}  // namespace dp
