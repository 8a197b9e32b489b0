#include <doctest.h>

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dphase/io.hpp"
#include "dphase/runner.hpp"

using namespace dp;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_base(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("dphase_runner_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_config(const fs::path& base, const std::string& text) {
  const fs::path path = base / "scenario.cfg";
  write_text_file(path.string(), text);
  return path.string();
}

const char* kSpaceChecks = R"(theorem = space_checks
mesh_n = 4
p = 1.4
q = 1.8
mu = constant 1.0
seed = 3
)";

const char* kEigenLinear = R"(theorem = eigen_only
mesh_n = 4
p = 2.0
beta = 1.0
)";

const char* kSteklovPair = R"(theorem = T41
mesh_n = 6
p = 1.4
q = 1.8
mu = linear-in-x1
f_power = 1.0 2.2
g_power = 1.0 2.1
zeta_margin = 0.5
theta = 1.0
)";

const char* kRobinPair = R"(theorem = T43
mesh_n = 6
p = 1.4
q = 1.8
mu = linear-in-x1
f_power = 1.0 2.2
zeta_margin = 0.5
beta = 1.0
theta = 1.0
)";

// Growth declaration sized so condition (A) holds with room to spare:
// 1*s       <= 0.714|s|^p + 0.286            (omega share 0.286)
// 0.05|xi|^gamma |s| <= 0.0116|xi|^p + 0.0385(|s|^p + 1)
const char* kConvection = R"(theorem = T31
mesh_n = 6
p = 1.4
q = 1.8
mu = constant 0.5
f_const = 1.0
f_grad = 0.05 0.3230769230769231
r1 = 1.3
a1 = 0.05
alpha1 = 1.0
b1 = 0.0116
b2 = 0.76
omega1 = 0.33
zeta = 1.0
beta = 1.0
)";

// Same reaction, but a declaration violating both smallness conditions.
const char* kConvectionBad = R"(theorem = T31
mesh_n = 6
p = 1.4
q = 1.8
mu = constant 0.5
f_const = 1.0
f_grad = 0.05 0.3230769230769231
r1 = 1.3
a1 = 0.05
alpha1 = 1.0
b1 = 1.2
b2 = 0.5
b3 = 2.0
omega1 = 0.33
zeta = 0.1
beta = 1.0
)";

void expect_clean_run(const char* config, const std::string& tag) {
  const fs::path base = fresh_base(tag);
  const RunOutcome out = run_scenario(write_config(base, config), base.string());
  CAPTURE(out.report);
  CHECK(out.pass);
  CHECK(fs::exists(out.manifest_path));
  CHECK(out.report.find("[PASS]") != std::string::npos);
  CHECK(out.report.find("result: PASS") != std::string::npos);
  CHECK(out.report.find("[FAIL]") == std::string::npos);
  CHECK(emit_report(out.manifest_path) == out.report);

  std::string verify_report;
  const bool ok = verify_manifest(out.manifest_path, verify_report);
  CAPTURE(verify_report);
  CHECK(ok);
  CHECK(verify_report.find("result: VERIFIED") != std::string::npos);
}

}  // namespace

TEST_CASE("space check scenario runs, passes and verifies") {
  expect_clean_run(kSpaceChecks, "space");
}

TEST_CASE("linear eigen scenario runs, passes and verifies") {
  expect_clean_run(kEigenLinear, "eigen");
}

TEST_CASE("two-solution scenarios run, pass and verify") {
  expect_clean_run(kSteklovPair, "steklov_pair");
  expect_clean_run(kRobinPair, "robin_pair");
}

TEST_CASE("convection scenario runs, passes and verifies") {
  expect_clean_run(kConvection, "convection");
}

TEST_CASE("repeat runs of one scenario produce identical manifests") {
  const fs::path base = fresh_base("determinism");
  const std::string config = write_config(base, kSteklovPair);
  const RunOutcome first = run_scenario(config, base.string());
  const RunOutcome second = run_scenario(config, base.string());
  REQUIRE(first.pass);
  REQUIRE(second.pass);
  CHECK(first.output_dir != second.output_dir);

  json a = json::parse(read_text_file(first.manifest_path));
  json b = json::parse(read_text_file(second.manifest_path));
  a.erase("wall_time_seconds");
  b.erase("wall_time_seconds");
  CHECK(a.dump(2) == b.dump(2));
}

TEST_CASE("a run whose condition gate fails is recorded as a failure") {
  const fs::path base = fresh_base("gate");
  const RunOutcome out = run_scenario(write_config(base, kConvectionBad), base.string());
  CHECK_FALSE(out.pass);
  CHECK(out.report.find("result: FAIL") != std::string::npos);

  const json m = json::parse(read_text_file(out.manifest_path));
  REQUIRE(m.contains("error"));
  CHECK(m["error"].get<std::string>().find("condition gate") != std::string::npos);
  CHECK_FALSE(m["pass"].get<bool>());

  std::string verify_report;
  CHECK_FALSE(verify_manifest(out.manifest_path, verify_report));
  CHECK(verify_report.find("result: NOT VERIFIED") != std::string::npos);
}

TEST_CASE("tampered stored fields are caught on verification") {
  const fs::path base = fresh_base("tamper");
  const RunOutcome out = run_scenario(write_config(base, kEigenLinear), base.string());
  REQUIRE(out.pass);

  const fs::path field = fs::path(out.output_dir) / "fields" / "eigenfunction_robin.vtk";
  REQUIRE(fs::exists(field));
  FemFunction u = read_vtk_scalar(field.string());
  u[0] += 0.5;
  const Mesh mesh = build_unit_square_mesh(4);
  write_vtk_scalar(field.string(), mesh, u, "eigenfunction_robin");

  std::string verify_report;
  CHECK_FALSE(verify_manifest(out.manifest_path, verify_report));
  CHECK(verify_report.find("result: NOT VERIFIED") != std::string::npos);
}
