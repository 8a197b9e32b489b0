#pragma once

#include <cstdint>
#include <string>

#include "dphase/nonlinearity.hpp"
#include "dphase/space.hpp"

namespace dp {

enum class TheoremKind { T31, T41, T43, eigen_only, space_checks };
enum class MuKind { constant, linear_x1, vanishing_half_plane };

std::string theorem_name(TheoremKind k);
std::string mu_name(MuKind k);

/// One scenario: which pipeline to run and every knob it needs. Parsed from a
/// flat key = value file; the raw text is kept for verbatim manifest echo.
struct ScenarioConfig {
  TheoremKind theorem = TheoremKind::eigen_only;
  int mesh_n = 16;
  double p = 1.4;
  double q = 1.8;
  bool strict_mode = true;
  MuKind mu_kind = MuKind::constant;
  double mu_value = 1.0;
  NonlinearitySpec spec;
  bool has_zeta = false;
  double zeta = 0.0;         // explicit value (T31)
  bool has_zeta_margin = false;
  double zeta_margin = 0.0;  // T41: zeta = lambda_S + margin; T43: lambda_R + theta + margin
  double beta = 1.0;
  double theta = 1.0;
  bool allow_theta_above_one = false;
  bool allow_uncertified = false;
  double damping = 1.0;
  std::uint64_t seed = 1;
  double eigen_tol = 1e-9;
  double gradient_tol = 1e-8;
  double sign_tol = 1e-8;
  double residual_tol = 1e-6;
  double step_tol = 1e-8;
  std::string raw;

  ExponentConfig exponents() const { return ExponentConfig(p, q, 2, strict_mode); }
};

/// Parses and validates; throws with one "field: message" entry per problem.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

WeightField make_weight(const ScenarioConfig& sc, const Mesh& mesh);

}  // namespace dp
