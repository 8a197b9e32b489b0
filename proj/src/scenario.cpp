#include "dphase/scenario.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dphase/io.hpp"

namespace dp {

std::string theorem_name(TheoremKind k) {
  switch (k) {
    case TheoremKind::T31: return "T31";
    case TheoremKind::T41: return "T41";
    case TheoremKind::T43: return "T43";
    case TheoremKind::eigen_only: return "eigen_only";
    case TheoremKind::space_checks: return "space_checks";
  }
  return "?";
}

std::string mu_name(MuKind k) {
  switch (k) {
    case MuKind::constant: return "constant";
    case MuKind::linear_x1: return "linear-in-x1";
    case MuKind::vanishing_half_plane: return "vanishing-half-plane";
  }
  return "?";
}

namespace {

struct Errors {
  std::vector<std::string> items;
  void add(const std::string& field, const std::string& message) {
    items.push_back(field + ": " + message);
  }
  void raise_if_any() const {
    if (items.empty()) return;
    std::string all = "scenario validation failed";
    for (const auto& e : items) all += "\n  " + e;
    throw std::runtime_error(all);
  }
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
  std::istringstream ss(s);
  ss >> out;
  return bool(ss) && ss.eof();
}

bool parse_pair(const std::string& s, double& a, double& b) {
  std::istringstream ss(s);
  ss >> a >> b;
  return bool(ss) && (ss >> std::ws).eof();
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  ScenarioConfig sc;
  sc.raw = text;
  Errors err;

  std::map<std::string, std::string> scalars;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      err.add("line " + std::to_string(lineno), "expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      err.add("line " + std::to_string(lineno), "expected 'key = value'");
      continue;
    }
    if (key == "f_power" || key == "f_grad" || key == "g_power") {
      double a = 0.0, b = 0.0;
      if (!parse_pair(value, a, b)) {
        err.add(key, "expected 'coefficient exponent', got '" + value + "'");
        continue;
      }
      if (key == "f_power") sc.spec.interior_powers.push_back({a, b});
      if (key == "f_grad") sc.spec.interior_gradients.push_back({a, b});
      if (key == "g_power") sc.spec.boundary_powers.push_back({a, b});
      continue;
    }
    if (scalars.count(key)) {
      err.add(key, "duplicate key");
      continue;
    }
    scalars[key] = value;
  }

  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = scalars.find(key);
    if (it == scalars.end()) return std::nullopt;
    std::string v = it->second;
    scalars.erase(it);
    return v;
  };
  auto take_double = [&](const std::string& key, double& out, bool& present) {
    if (auto v = take(key)) {
      present = true;
      if (!parse_double(*v, out)) err.add(key, "expected a number, got '" + *v + "'");
    }
  };
  auto take_double_into = [&](const std::string& key, double& out) {
    bool present = false;
    take_double(key, out, present);
  };
  auto take_bool = [&](const std::string& key, bool& out) {
    if (auto v = take(key)) {
      if (*v == "true")
        out = true;
      else if (*v == "false")
        out = false;
      else
        err.add(key, "expected true or false, got '" + *v + "'");
    }
  };

  if (auto v = take("theorem")) {
    if (*v == "T31") sc.theorem = TheoremKind::T31;
    else if (*v == "T41") sc.theorem = TheoremKind::T41;
    else if (*v == "T43") sc.theorem = TheoremKind::T43;
    else if (*v == "eigen_only") sc.theorem = TheoremKind::eigen_only;
    else if (*v == "space_checks") sc.theorem = TheoremKind::space_checks;
    else err.add("theorem", "unknown value '" + *v + "'");
  } else {
    err.add("theorem", "required");
  }

  if (auto v = take("mesh_n")) {
    double d = 0.0;
    if (!parse_double(*v, d) || d != int(d))
      err.add("mesh_n", "expected an integer, got '" + *v + "'");
    else
      sc.mesh_n = int(d);
  }
  take_double_into("p", sc.p);
  take_double_into("q", sc.q);
  take_bool("strict_mode", sc.strict_mode);

  if (auto v = take("mu")) {
    std::istringstream ss(*v);
    std::string kind;
    ss >> kind;
    if (kind == "constant") {
      sc.mu_kind = MuKind::constant;
      if (!(ss >> sc.mu_value) || !(ss >> std::ws).eof())
        err.add("mu", "constant needs one value, got '" + *v + "'");
    } else if (kind == "linear-in-x1") {
      sc.mu_kind = MuKind::linear_x1;
    } else if (kind == "vanishing-half-plane") {
      sc.mu_kind = MuKind::vanishing_half_plane;
    } else {
      err.add("mu", "unknown descriptor '" + *v + "'");
    }
  }

  take_double("zeta", sc.zeta, sc.has_zeta);
  take_double("zeta_margin", sc.zeta_margin, sc.has_zeta_margin);
  take_double_into("beta", sc.beta);
  take_double_into("theta", sc.theta);
  take_bool("allow_theta_above_one", sc.allow_theta_above_one);
  take_bool("allow_uncertified", sc.allow_uncertified);
  take_double_into("damping", sc.damping);
  if (auto v = take("seed")) {
    try {
      sc.seed = std::stoull(*v);
    } catch (const std::exception&) {
      err.add("seed", "expected an unsigned integer, got '" + *v + "'");
    }
  }
  take_double_into("eigen_tol", sc.eigen_tol);
  take_double_into("gradient_tol", sc.gradient_tol);
  take_double_into("sign_tol", sc.sign_tol);
  take_double_into("residual_tol", sc.residual_tol);
  take_double_into("step_tol", sc.step_tol);

  take_double_into("f_const", sc.spec.interior_constant);
  take_double_into("g_const", sc.spec.boundary_constant);
  auto& gm = sc.spec.growth;
  take_double_into("r1", gm.r1);
  take_double_into("r2", gm.r2);
  take_double_into("a1", gm.a1);
  take_double_into("a2", gm.a2);
  take_double_into("a3", gm.a3);
  take_double_into("alpha1", gm.alpha1);
  take_double_into("alpha2", gm.alpha2);
  take_double_into("b1", gm.b1);
  take_double_into("b2", gm.b2);
  take_double_into("b3", gm.b3);
  take_double_into("omega1", gm.omega1);
  take_double_into("omega2", gm.omega2);

  for (const auto& [key, value] : scalars) err.add(key, "unknown key");

  // Field-level validation; cross-field checks need the exponent pair.
  if (sc.mesh_n < 1) err.add("mesh_n", "must be >= 1");
  if (sc.mu_kind == MuKind::constant && sc.mu_value < 0.0) err.add("mu", "must be >= 0");
  if (!(sc.damping > 0.0) || sc.damping > 1.0) err.add("damping", "must lie in (0, 1]");
  if (!(sc.eigen_tol > 0.0)) err.add("eigen_tol", "must be > 0");
  if (!(sc.gradient_tol > 0.0)) err.add("gradient_tol", "must be > 0");
  if (!(sc.sign_tol > 0.0)) err.add("sign_tol", "must be > 0");
  if (!(sc.residual_tol > 0.0)) err.add("residual_tol", "must be > 0");
  if (!(sc.step_tol > 0.0)) err.add("step_tol", "must be > 0");

  // eigen_only never touches the double phase space, so p = 2 (the linear
  // oracle regime) stays legal there; every other pipeline needs the pair.
  std::optional<ExponentConfig> cfg;
  if (sc.theorem == TheoremKind::eigen_only) {
    if (!(sc.p > 1.0)) err.add("p", "must be > 1");
  } else {
    try {
      cfg.emplace(sc.p, sc.q, 2, sc.strict_mode);
    } catch (const std::exception& e) {
      err.add("p/q", e.what());
    }
  }

  switch (sc.theorem) {
    case TheoremKind::T31:
      if (!sc.has_zeta || !(sc.zeta > 0.0)) err.add("zeta", "T31 requires an explicit zeta > 0");
      if (sc.has_zeta_margin) err.add("zeta_margin", "not used by T31 (zeta is explicit)");
      if (!(sc.beta > 0.0)) err.add("beta", "must be > 0");
      if (cfg) {
        try {
          validate_growth(sc.spec, *cfg);
        } catch (const std::exception& e) {
          err.add("spec", e.what());
        }
      }
      break;
    case TheoremKind::T41:
      if (!sc.has_zeta_margin || !(sc.zeta_margin > 0.0))
        err.add("zeta_margin", "T41 requires a positive Steklov margin");
      if (sc.has_zeta) err.add("zeta", "not used by T41 (derived from the eigenvalue)");
      if (!(sc.theta > 0.0)) err.add("theta", "must be > 0");
      if (sc.theta > 1.0 && !sc.allow_theta_above_one)
        err.add("theta", "T41 requires theta in (0, 1]; set allow_theta_above_one to override");
      if (cfg) {
        if (!superlinear_interior(sc.spec, *cfg))
          err.add("f_power", "T41 needs a superlinear interior reaction (positive "
                             "coefficients, leading exponent > q, no constant or gradient terms)");
        if (!superlinear_boundary(sc.spec, *cfg))
          err.add("g_power", "T41 needs a superlinear boundary reaction");
        if (!interior_vanishes_at_zero(sc.spec, sc.q))
          err.add("f_power", "T41 needs every interior exponent above q (decay at 0)");
        if (!boundary_vanishes_at_zero(sc.spec, sc.p))
          err.add("g_power", "T41 needs every boundary exponent above p (decay at 0)");
      }
      break;
    case TheoremKind::T43:
      if (!sc.has_zeta_margin || !(sc.zeta_margin > 0.0))
        err.add("zeta_margin", "T43 requires a positive Robin margin");
      if (sc.has_zeta) err.add("zeta", "not used by T43 (derived from the eigenvalue)");
      if (!(sc.theta > 0.0)) err.add("theta", "must be > 0");
      if (!(sc.beta > 0.0)) err.add("beta", "must be > 0");
      if (!sc.spec.boundary_powers.empty() || sc.spec.boundary_constant != 0.0)
        err.add("g_power", "T43 has no boundary reaction");
      if (cfg) {
        if (!superlinear_interior(sc.spec, *cfg))
          err.add("f_power", "T43 needs a superlinear interior reaction");
        if (!interior_vanishes_at_zero(sc.spec, sc.p))
          err.add("f_power", "T43 needs every interior exponent above p (decay at 0)");
      }
      break;
    case TheoremKind::eigen_only:
      if (!(sc.beta > 0.0)) err.add("beta", "must be > 0");
      break;
    case TheoremKind::space_checks:
      break;
  }

  err.raise_if_any();
  return sc;
}

ScenarioConfig load_scenario(const std::string& path) {
  return parse_scenario(read_text_file(path));
}

WeightField make_weight(const ScenarioConfig& sc, const Mesh& mesh) {
  switch (sc.mu_kind) {
    case MuKind::constant: return WeightField::constant(mesh, sc.mu_value);
    case MuKind::linear_x1: return WeightField::linear_x1(mesh);
    case MuKind::vanishing_half_plane: return WeightField::vanishing_half_plane(mesh);
  }
  throw std::logic_error("make_weight: unreachable");
}

}  // namespace dp
