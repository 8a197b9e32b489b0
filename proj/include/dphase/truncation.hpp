#pragma once

#include "dphase/nonlinearity.hpp"
#include "dphase/space.hpp"

namespace dp {

/// Which theorem's cut-off family the set realizes: steklov pairs the interior
/// reaction -f with the boundary term zeta s^{p-1} - g; robin pairs the
/// interior term zeta s^{p-1} - f with the boundary term -beta s^{p-1}.
enum class TruncationKind { steklov, robin };
enum class TruncationSign { plus, minus };

struct TruncationSet {
  TruncationKind kind = TruncationKind::steklov;
  TruncationSign sign = TruncationSign::plus;
  double upper = 0.0;  // the constant bound, > 1
  double lower = 0.0;  // -upper
  double zeta = 0.0;
  double beta = 0.0;
  double theta = 0.0;
};

/// Constructive bound: the smallest per-term threshold past which the
/// superlinear reaction dominates the target multiple of |s|^q (f against
/// target 1 and g against target zeta for the steklov kind, f against target
/// zeta for the robin kind), then maxed with 1 and inflated by 1.5.
double compute_truncation_bound(const NonlinearitySpec& spec, const ExponentConfig& cfg,
                                double zeta, TruncationKind kind);

/// Builds and validates a truncation set; theta must lie in (0,1] for the
/// steklov kind (override flag for theta > 1) and be positive for robin.
TruncationSet make_truncation_set(TruncationKind kind, TruncationSign sign,
                                  const NonlinearitySpec& spec, const ExponentConfig& cfg,
                                  double zeta, double beta, double theta,
                                  bool allow_theta_above_one = false);

struct TruncationValues {
  double interior = 0.0;
  double boundary = 0.0;
};

/// Exact piecewise evaluation of the cut-off pair at s.
TruncationValues truncation_eval(const TruncationSet& T, const NonlinearitySpec& spec,
                                 const ExponentConfig& cfg, const Point2& x, double s);

/// Primitives of the cut-offs from 0: closed-form inside the active interval,
/// linear continuation past the bounds where the cut-offs are constant.
TruncationValues truncation_primitive(const TruncationSet& T, const NonlinearitySpec& spec,
                                      const ExponentConfig& cfg, const Point2& x, double s);

}  // namespace dp
