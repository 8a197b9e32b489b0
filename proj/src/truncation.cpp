#include "dphase/truncation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dp {

namespace {

// smallest threshold past which sum_i a_i |s|^{r_i} >= target |s|^q; the terms
// all have positive coefficients, so any single superlinear term suffices
double power_threshold(const std::vector<PowerTerm>& terms, double q, double target) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& term : terms) {
    if (term.coefficient > 0.0 && term.exponent > q)
      best = std::min(best, std::pow(target / term.coefficient, 1.0 / (term.exponent - q)));
  }
  return best;
}

}  // namespace

double compute_truncation_bound(const NonlinearitySpec& spec, const ExponentConfig& cfg,
                                double zeta, TruncationKind kind) {
  double m;
  if (kind == TruncationKind::steklov) {
    if (!superlinear_interior(spec, cfg) || !superlinear_boundary(spec, cfg))
      throw std::invalid_argument(
          "compute_truncation_bound: steklov kind requires superlinear f and g");
    m = std::max(power_threshold(spec.interior_powers, cfg.q, 1.0),
                 power_threshold(spec.boundary_powers, cfg.q, zeta));
  } else {
    if (!superlinear_interior(spec, cfg))
      throw std::invalid_argument("compute_truncation_bound: robin kind requires superlinear f");
    m = power_threshold(spec.interior_powers, cfg.q, zeta);
  }
  return 1.5 * std::max(m, 1.0);
}

TruncationSet make_truncation_set(TruncationKind kind, TruncationSign sign,
                                  const NonlinearitySpec& spec, const ExponentConfig& cfg,
                                  double zeta, double beta, double theta,
                                  bool allow_theta_above_one) {
  if (kind == TruncationKind::steklov) {
    if (!(theta > 0.0) || (theta > 1.0 && !allow_theta_above_one))
      throw std::invalid_argument(
          "make_truncation_set: steklov kind requires theta in (0,1] (override flag for larger)");
  } else {
    if (!(theta > 0.0))
      throw std::invalid_argument("make_truncation_set: robin kind requires theta > 0");
    if (!spec.boundary_powers.empty() || spec.boundary_constant != 0.0)
      throw std::invalid_argument(
          "make_truncation_set: robin kind admits no boundary reaction terms");
    if (!(beta > 0.0))
      throw std::invalid_argument("make_truncation_set: robin kind requires beta > 0");
  }
  TruncationSet T;
  T.kind = kind;
  T.sign = sign;
  T.upper = compute_truncation_bound(spec, cfg, zeta, kind);
  T.lower = -T.upper;
  T.zeta = zeta;
  T.beta = beta;
  T.theta = theta;
  if (!(T.upper > 1.0)) throw std::invalid_argument("make_truncation_set: bound must exceed 1");
  return T;
}

TruncationValues truncation_eval(const TruncationSet& T, const NonlinearitySpec& spec,
                                 const ExponentConfig& cfg, const Point2& x, double s) {
  const Point2 no_grad{0.0, 0.0};
  const double p = cfg.p;
  TruncationValues v;
  // clamp into the active interval; outside it the cut-offs freeze at the bound
  double c;
  if (T.sign == TruncationSign::plus)
    c = s < 0.0 ? 0.0 : std::min(s, T.upper);
  else
    c = s > 0.0 ? 0.0 : std::max(s, T.lower);

  // the validated reactions vanish at 0, so the frozen inactive half-line
  // (c = 0) yields 0 from the same formulas
  if (T.kind == TruncationKind::steklov) {
    v.interior = -evaluate_f(spec, x, c, no_grad);
    v.boundary = T.zeta * signed_power(c, p) - evaluate_g(spec, x, c);
  } else {
    v.interior = T.zeta * signed_power(c, p) - evaluate_f(spec, x, c, no_grad);
    v.boundary = -T.beta * signed_power(c, p);
  }
  return v;
}

TruncationValues truncation_primitive(const TruncationSet& T, const NonlinearitySpec& spec,
                                      const ExponentConfig& cfg, const Point2& x, double s) {
  const double p = cfg.p;
  TruncationValues v;

  double c, tail;  // clamped argument and the linear overshoot past the bound
  if (T.sign == TruncationSign::plus) {
    if (s <= 0.0) return v;
    c = std::min(s, T.upper);
    tail = s > T.upper ? s - T.upper : 0.0;
  } else {
    if (s >= 0.0) return v;
    c = std::max(s, T.lower);
    tail = s < T.lower ? s - T.lower : 0.0;
  }

  TruncationValues slope;
  if (tail != 0.0) slope = truncation_eval(T, spec, cfg, x, c);

  const double abs_cp = std::pow(std::abs(c), p);
  if (T.kind == TruncationKind::steklov) {
    v.interior = -primitive_F(spec, x, c);
    v.boundary = T.zeta / p * abs_cp - primitive_G(spec, x, c);
  } else {
    v.interior = T.zeta / p * abs_cp - primitive_F(spec, x, c);
    v.boundary = -T.beta / p * abs_cp;
  }
  if (tail != 0.0) {
    v.interior += tail * slope.interior;
    v.boundary += tail * slope.boundary;
  }
  return v;
}

}  // namespace dp
