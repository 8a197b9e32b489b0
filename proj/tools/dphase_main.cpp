#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "dphase/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"double phase problems: eigenpairs, truncated-energy minimization, Picard iteration"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_base = "runs";
  CLI::App* run = app.add_subcommand("run", "execute a scenario config");
  run->add_option("config", config_path, "scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_base, "output base directory (default: runs)");

  std::string verify_path;
  CLI::App* verify =
      app.add_subcommand("verify", "re-check a finished run against its stored fields");
  verify->add_option("manifest", verify_path, "manifest.json of a run")
      ->required()
      ->check(CLI::ExistingFile);

  std::string report_path;
  CLI::App* report = app.add_subcommand("report", "print the summary of a stored manifest");
  report->add_option("manifest", report_path, "manifest.json of a run")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* suite = app.add_subcommand("suite", "run the acceptance criteria");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const dp::RunOutcome outcome = dp::run_scenario(config_path, out_base);
      std::cout << outcome.report << "output: " << outcome.output_dir << "\n";
      return outcome.pass ? 0 : 1;
    }
    if (verify->parsed()) {
      std::string text;
      const bool ok = dp::verify_manifest(verify_path, text);
      std::cout << text;
      return ok ? 0 : 1;
    }
    if (report->parsed()) {
      std::cout << dp::emit_report(report_path);
      return 0;
    }
    if (suite->parsed()) return dp::acceptance::run_all(std::cout) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
