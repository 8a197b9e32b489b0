#pragma once

#include <string>

namespace dp {

struct RunOutcome {
  bool pass = false;
  std::string output_dir;
  std::string manifest_path;
  std::string report;
};

/// Executes the scenario at config_path and writes manifest.json together
/// with fields/*.vtk and tables/*.csv into a fresh timestamped directory
/// under out_base. The directory appears atomically: everything is staged
/// in a hidden sibling and renamed only after the manifest is complete.
RunOutcome run_scenario(const std::string& config_path, const std::string& out_base);

/// Re-checks a finished run: reparses the embedded config, rebuilds the mesh
/// and weight deterministically, reads the stored fields back and recomputes
/// every gated check, comparing outcome and value against the manifest.
bool verify_manifest(const std::string& manifest_path, std::string& report);

/// One-page pass/fail summary of a stored manifest.
std::string emit_report(const std::string& manifest_path);

}  // namespace dp
