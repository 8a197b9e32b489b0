#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace dp {
namespace vec {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double max_norm(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace vec

/// Objective callback: fills the gradient and returns the value at x.
using Objective = std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;
/// Optional projection applied to every accepted iterate (e.g. renormalization
/// for scale-invariant objectives; must not increase the objective).
using Projection = std::function<void(std::vector<double>& x)>;

struct DescentOptions {
  int max_iterations = 5000;
  double gradient_tolerance = 1e-8;  // max-norm of the gradient at the iterate
  int history = 8;                   // quasi-Newton memory
  double armijo_c1 = 1e-4;
  int max_backtracks = 60;
};

struct DescentResult {
  std::vector<double> x;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Set when no further numerical progress is possible: every backtracked
  /// step was rejected, or thirty consecutive accepted steps decreased the
  /// value by less than roundoff resolution.
  bool line_search_failed = false;
};

/// Limited-memory quasi-Newton descent with Armijo backtracking. Falls back to
/// steepest descent whenever the two-loop direction fails to descend; curvature
/// pairs with s.y <= 0 are skipped. Stops at gradient max-norm tolerance or at
/// the roundoff floor, whichever comes first.
DescentResult minimize_descent(const Objective& f, std::vector<double> x0,
                               const DescentOptions& opts, const Projection& project = nullptr);

}  // namespace dp
