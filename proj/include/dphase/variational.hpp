#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dphase/fem.hpp"
#include "dphase/truncation.hpp"

namespace dp {

/// Weighted summands of a truncated energy functional; total is the signed sum
/// grad_p + grad_q + val_p + val_q - interior_primitive - boundary_primitive.
struct EnergyBreakdown {
  double grad_p = 0.0;              // (1/p) int |grad u|^p
  double grad_q = 0.0;              // (1/q) int mu |grad u|^q
  double val_p = 0.0;               // (theta/p) int |u|^p
  double val_q = 0.0;               // (1/q) int mu |u|^q
  double interior_primitive = 0.0;  // int of the interior cut-off primitive
  double boundary_primitive = 0.0;  // boundary integral of the other primitive
  double total = 0.0;
};

EnergyBreakdown energy(const FemFunction& u, const TruncationSet& T, const NonlinearitySpec& spec,
                       const ExponentConfig& cfg, const WeightField& mu, const Mesh& mesh,
                       const QuadratureRule& rule);

/// Analytic gradient of the energy total with respect to nodal values; it
/// differentiates the quadrature sums themselves, so central differences of
/// energy() agree to machine-level accuracy.
std::vector<double> energy_gradient(const FemFunction& u, const TruncationSet& T,
                                    const NonlinearitySpec& spec, const ExponentConfig& cfg,
                                    const WeightField& mu, const Mesh& mesh,
                                    const QuadratureRule& rule);

/// Residual of the truncated Euler-Lagrange equation: the energy gradient.
/// Residual of the original (untruncated) problem the theorem targets.
std::vector<double> untruncated_residual(const FemFunction& u, const TruncationSet& T,
                                         const NonlinearitySpec& spec, const ExponentConfig& cfg,
                                         const WeightField& mu, const Mesh& mesh,
                                         const QuadratureRule& rule);

struct SmallTSearch {
  bool found = false;
  int k = -1;          // first dyadic level 2^{-k} with negative energy
  double t = 0.0;
  double energy = 0.0;
};

/// Dyadic ladder t = 2^{-k}, k = 0..max_k, along the (sign-matched) first
/// eigenfunction; reports the first level with negative energy.
SmallTSearch small_t_search(const TruncationSet& T, const NonlinearitySpec& spec,
                            const ExponentConfig& cfg, const WeightField& mu, const Mesh& mesh,
                            const QuadratureRule& rule, const FemFunction& eigenfunction,
                            int max_k = 26);

struct MinimizeOptions {
  int max_iterations = 20000;
  double gradient_tolerance = 1e-8;
  std::uint64_t seed = 1;
  bool require_negative_energy = true;  // throw when no start goes below 0
};

struct MinimizeCertificate {
  bool nontrivial = false;     // energy < 0
  double residual = 0.0;       // max-norm of the truncated-problem gradient
  int iterations = 0;
  std::string winning_start;   // "perturbation", "eigenfunction", "random"
  double small_t = 0.0;        // t used for the eigenfunction start (0 if unused)
};

struct MinimizeResult {
  FemFunction minimizer;
  EnergyBreakdown breakdown;
  MinimizeCertificate certificate;
};

/// Multistart descent on the truncated energy: a near-zero constant start, a
/// small multiple of the first eigenfunction (from the dyadic search), and a
/// seeded random start inside the truncation interval. Returns the lowest
/// energy among converged starts; ties break by lower residual.
MinimizeResult minimize_energy(const TruncationSet& T, const NonlinearitySpec& spec,
                               const ExponentConfig& cfg, const WeightField& mu, const Mesh& mesh,
                               const QuadratureRule& rule, const FemFunction& eigenfunction,
                               const MinimizeOptions& opts);

struct SignReport {
  bool bounds_ok = false;      // nodal values inside [lower - tol, upper + tol]
  bool sign_pure = false;      // wrong-sign part has modular below tolerance
  double min_value = 0.0;
  double max_value = 0.0;
  double wrong_sign_modular = 0.0;
  double untruncated_residual_norm = 0.0;
  bool residual_ok = false;
};

/// Post-hoc verification that a minimizer satisfies the theorem's sandwich and
/// solves the original problem at the stated tolerances.
SignReport verify_constant_sign(const FemFunction& u, const TruncationSet& T,
                                const NonlinearitySpec& spec, const ExponentConfig& cfg,
                                const WeightField& mu, const Mesh& mesh,
                                const QuadratureRule& rule, double sign_tol = 1e-8,
                                double residual_tol = 1e-6);

}  // namespace dp
