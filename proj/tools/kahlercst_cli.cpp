/**
 * @file kahlercst_cli.cpp
 * @brief Command line driver for the adapted-geometry and transform library.
 *
 * Subcommands:
 *   geometry-check   sampled residuals of the adapted-frame identities (CSV)
 *   norms            Peter-Weyl coefficient norms a_rho(tau2) (CSV, cached)
 *   transform        apply the unitarized transform U_tau to a section (JSON)
 *   semigroup-scan   composition defects of the unitarizing scalars (CSV)
 *   limit-scan       sqrt(d) a_rho(tau2) along a tau2 grid (CSV)
 *
 * Exit codes: 0 success, 1 threshold violation or computation failure,
 * 2 configuration/usage error.
 */

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kahlercst/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adapted Kaehler structures and coherent-state transforms "
               "on T*K for K = S1, T^n, SU(2)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  int workers_override = 0;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"geometry-check", "verify adapted-frame identities on sampled points"},
      {"norms", "compute coefficient norms a_rho(tau2)"},
      {"transform", "apply U_tau to a section file"},
      {"semigroup-scan", "scan unitarizer composition defects"},
      {"limit-scan", "scan sqrt(d) a_rho(tau2) toward the boundary"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON run configuration file")
        ->required();
    sub->add_option("--output", output_override,
                    "override the config's output path");
    sub->add_option("--workers", workers_override,
                    "override the config's worker count");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    kcst::RunConfig cfg = kcst::load_config(config_path);
    if (!output_override.empty()) cfg.output = output_override;
    if (workers_override > 0) cfg.workers = workers_override;

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "geometry-check") return kcst::run_geometry_check(cfg);
    if (cmd == "norms") return kcst::run_norms(cfg);
    if (cmd == "transform") return kcst::run_transform(cfg);
    if (cmd == "semigroup-scan") return kcst::run_semigroup_scan(cfg);
    if (cmd == "limit-scan") return kcst::run_limit_scan(cfg);
    std::cerr << "unknown subcommand\n";
    return 2;
  } catch (const kcst::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
