#pragma once

#include <string>
#include <vector>

#include "dphase/fem.hpp"
#include "dphase/mesh.hpp"
#include "dphase/quadrature.hpp"

namespace dp {

/// Exponent pair 1 < p < q with spatial dimension N and the critical exponents
/// derived from p. Requires p < N; strict_mode additionally enforces q < N.
struct ExponentConfig {
  double p;
  double q;
  int N;
  bool strict_mode;

  ExponentConfig(double p, double q, int N = 2, bool strict_mode = true);

  double p_star() const { return N * p / (N - p); }
  double p_lower_star() const { return (N - 1) * p / (N - p); }
};

/// Nodal weight mu >= 0, interpolated linearly at quadrature points.
struct WeightField {
  std::vector<double> values;

  explicit WeightField(std::vector<double> nodal_values);

  static WeightField constant(const Mesh& mesh, double m);
  /// mu(x) = x1.
  static WeightField linear_x1(const Mesh& mesh);
  /// mu(x) = max(x1 - 1/2, 0): vanishes on the left half of the square.
  static WeightField vanishing_half_plane(const Mesh& mesh);

  double operator[](std::size_t i) const { return values[i]; }
};

/// The four summands of the full modular, plus their sum.
struct ModularReport {
  double gradient_p_term = 0.0;
  double gradient_q_term = 0.0;
  double value_p_term = 0.0;
  double value_q_term = 0.0;
  double total = 0.0;
};

/// CSV row "grad_p,grad_q,val_p,val_q,total,norm0" with %.17g fields.
std::string to_csv_row(const ModularReport& report, double norm0);

/// Pairing terms of the double phase operator against phi, accumulated with
/// the exact same quadrature and expression order as modular_full, so that
/// phi = u reproduces the modular report bit for bit.
ModularReport modular_pairing(const FemFunction& u, const FemFunction& phi,
                              const ExponentConfig& cfg, const WeightField& mu, const Mesh& mesh,
                              const QuadratureRule& rule);

/// Plain modular: integral of |u|^p + mu |u|^q over the mesh.
double modular_plain(const FemFunction& u, const ExponentConfig& cfg, const WeightField& mu,
                     const Mesh& mesh, const QuadratureRule& rule);

/// Full modular: gradient and value terms of both phases.
ModularReport modular_full(const FemFunction& u, const ExponentConfig& cfg, const WeightField& mu,
                           const Mesh& mesh, const QuadratureRule& rule);

enum class ModularKind { plain, full };

/// Luxemburg norm: 0 for u = 0, otherwise the unique tau > 0 with
/// modular(u/tau) = 1, found by bracketing and bisection to relative width
/// 1e-12. The full variant is the equivalent norm written ||u||_0.
double luxemburg_norm(const FemFunction& u, const ExponentConfig& cfg, const WeightField& mu,
                      const Mesh& mesh, const QuadratureRule& rule,
                      ModularKind which = ModularKind::full);

/// Executable clauses of the norm-modular proposition for one function.
struct ModularRelationsReport {
  double norm0 = 0.0;
  double modular = 0.0;
  bool clause_i = false;    // modular(u/norm0) = 1 within 1e-10
  bool clause_ii = false;   // norm0 vs 1 trichotomy matches modular vs 1
  bool clause_iii = false;  // norm0 < 1: norm0^q <= modular <= norm0^p
  bool clause_iv = false;   // norm0 > 1: norm0^p <= modular <= norm0^q
  bool ok = false;
  std::string failed_clause;  // empty when ok
};

/// Checks proposition clauses (i)-(iv) with 1e-9 slack (1e-10 for clause (i)).
/// Requires u != 0 nodally.
ModularRelationsReport check_modular_norm_relations(const FemFunction& u,
                                                    const ExponentConfig& cfg,
                                                    const WeightField& mu, const Mesh& mesh,
                                                    const QuadratureRule& rule);

}  // namespace dp
