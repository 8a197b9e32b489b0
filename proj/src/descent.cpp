#include "dphase/descent.hpp"

#include <algorithm>
#include <deque>

namespace dp {

namespace {

struct Pair {
  std::vector<double> s, y;
  double rho;
};

std::vector<double> two_loop_direction(const std::vector<double>& grad,
                                       const std::deque<Pair>& history) {
  std::vector<double> q = grad;
  std::vector<double> alpha(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    alpha[i] = history[i].rho * vec::dot(history[i].s, q);
    vec::axpy(-alpha[i], history[i].y, q);
  }
  const Pair& last = history.back();
  double gamma = vec::dot(last.s, last.y) / vec::dot(last.y, last.y);
  for (double& v : q) v *= gamma;
  for (std::size_t i = 0; i < history.size(); ++i) {
    double beta = history[i].rho * vec::dot(history[i].y, q);
    vec::axpy(alpha[i] - beta, history[i].s, q);
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

DescentResult minimize_descent(const Objective& f, std::vector<double> x0,
                               const DescentOptions& opts, const Projection& project) {
  DescentResult res;
  std::vector<double> x = std::move(x0);
  if (project) project(x);
  std::vector<double> grad(x.size());
  double value = f(x, grad);

  std::deque<Pair> history;
  std::vector<double> cand(x.size()), cand_grad(x.size());
  int stagnant = 0;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    double gnorm = vec::max_norm(grad);
    if (gnorm <= opts.gradient_tolerance) {
      res.x = x;
      res.value = value;
      res.gradient_norm = gnorm;
      res.iterations = iter;
      res.converged = true;
      return res;
    }

    std::vector<double> dir;
    bool from_history = !history.empty();
    if (from_history) dir = two_loop_direction(grad, history);
    double slope = from_history ? vec::dot(grad, dir) : 0.0;
    if (!from_history || !(slope < 0.0) || !std::isfinite(slope)) {
      dir = grad;
      for (double& v : dir) v = -v;
      slope = vec::dot(grad, dir);
      from_history = false;
    }

    // Unit first step along quasi-Newton directions; scale a raw steepest
    // descent step so its largest component moves by one.
    double step = from_history ? 1.0 : 1.0 / std::max(gnorm, 1.0);
    bool accepted = false;
    double cand_value = 0.0;
    for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < x.size(); ++i) cand[i] = x[i] + step * dir[i];
      if (project) project(cand);
      cand_value = f(cand, cand_grad);
      if (std::isfinite(cand_value) && cand_value <= value + opts.armijo_c1 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted && from_history) {
      // retry once as damped steepest descent before giving up
      history.clear();
      dir = grad;
      for (double& v : dir) v = -v;
      slope = vec::dot(grad, dir);
      step = 1.0 / std::max(gnorm, 1.0);
      for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
        for (std::size_t i = 0; i < x.size(); ++i) cand[i] = x[i] + step * dir[i];
        if (project) project(cand);
        cand_value = f(cand, cand_grad);
        if (std::isfinite(cand_value) && cand_value <= value + opts.armijo_c1 * step * slope) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
    }
    if (!accepted) {
      res.x = x;
      res.value = value;
      res.gradient_norm = gnorm;
      res.iterations = iter;
      res.line_search_failed = true;
      return res;
    }

    Pair pair;
    pair.s.resize(x.size());
    pair.y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      pair.s[i] = cand[i] - x[i];
      pair.y[i] = cand_grad[i] - grad[i];
    }
    double sy = vec::dot(pair.s, pair.y);
    double sn = std::sqrt(vec::dot(pair.s, pair.s)), yn = std::sqrt(vec::dot(pair.y, pair.y));
    if (sy > 1e-10 * sn * yn && sy > 0.0) {
      pair.rho = 1.0 / sy;
      history.push_back(std::move(pair));
      if (static_cast<int>(history.size()) > opts.history) history.pop_front();
    }

    // Once the Armijo margin underflows below one ulp of the value, steps with
    // no decrease at all still pass the test; a run of such steps means the
    // search is harvesting evaluation noise, not descending.
    if (value - cand_value <= 1e-14 * std::max(1.0, std::abs(value)))
      ++stagnant;
    else
      stagnant = 0;

    x.swap(cand);
    grad.swap(cand_grad);
    value = cand_value;

    if (stagnant >= 30) {
      res.x = x;
      res.value = value;
      res.gradient_norm = vec::max_norm(grad);
      res.iterations = iter + 1;
      res.line_search_failed = true;
      return res;
    }
  }

  res.x = x;
  res.value = value;
  res.gradient_norm = vec::max_norm(grad);
  res.iterations = opts.max_iterations;
  res.converged = res.gradient_norm <= opts.gradient_tolerance;
  return res;
}

}  // namespace dp
