#pragma once

#include <stdexcept>

#include "dphase/fem.hpp"
#include "dphase/mesh.hpp"
#include "dphase/quadrature.hpp"

namespace dp {

enum class EigenNormalization { robin, steklov };

struct EigenResult {
  double lambda = 0.0;
  FemFunction eigenfunction;
  EigenNormalization normalization = EigenNormalization::robin;
  int iterations = 0;
  double residual = 0.0;  // max-norm of the quotient gradient at the minimizer
};

/// Thrown when descent exhausts its iteration budget; carries the best iterate.
struct EigenConvergenceError : std::runtime_error {
  EigenResult best;
  EigenConvergenceError(const std::string& what, EigenResult best_so_far)
      : std::runtime_error(what), best(std::move(best_so_far)) {}
};

/// Rayleigh quotient (int |grad u|^p + beta int_bdry |u|^p) / int |u|^p.
double rayleigh_robin(const FemFunction& u, const Mesh& mesh, double p, double beta,
                      const QuadratureRule& rule = default_rule());

/// Rayleigh quotient (int |grad u|^p + int |u|^p) / int_bdry |u|^p.
double rayleigh_steklov(const FemFunction& u, const Mesh& mesh, double p,
                        const QuadratureRule& rule = default_rule());

/// First Robin eigenpair by quotient descent with ||u||_p renormalization,
/// started from u = 1. The returned eigenfunction is sign-fixed to positive
/// mean and normalized ||u||_p = 1.
EigenResult robin_first_eigenpair(const Mesh& mesh, double p, double beta, double tol = 1e-9,
                                  int max_iterations = 50000,
                                  const QuadratureRule& rule = default_rule());

/// First Steklov eigenpair, normalized ||u||_{p, boundary} = 1.
EigenResult steklov_first_eigenpair(const Mesh& mesh, double p, double tol = 1e-9,
                                    int max_iterations = 50000,
                                    const QuadratureRule& rule = default_rule());

/// Interior seminorm int |grad u|^p; exact per triangle for P1.
/// Adds the derivative to *grad when grad is non-null.
double dirichlet_p_energy(const FemFunction& u, const Mesh& mesh, double p,
                          std::vector<double>* grad = nullptr);

/// int |u|^p by interior quadrature; optional derivative accumulation.
double interior_p_norm(const FemFunction& u, const Mesh& mesh, double p,
                       const QuadratureRule& rule, std::vector<double>* grad = nullptr);

/// int_bdry |u|^p by edge quadrature; optional derivative accumulation.
double boundary_p_norm(const FemFunction& u, const Mesh& mesh, double p,
                       const QuadratureRule& rule, std::vector<double>* grad = nullptr);

}  // namespace dp
