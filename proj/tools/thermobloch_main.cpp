// Copyright (c) thermobloch contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Batch front door: parse a cell/sweep configuration, run the Floquet-Bloch
// sweep and band reports, emit CSV tables, a run manifest and optional SVG
// band diagrams. `--check` runs the randomized invariant suite instead.

#include <CLI11.hpp>

#include "thermobloch/checks.hpp"
#include "thermobloch/runner.hpp"

int main(int argc, char** argv) {
  using namespace thermobloch;

  CLI::App app{"thermobloch: complex Floquet-Bloch spectra of thermodiffusive "
               "elastic laminates"};
  app.set_version_flag("--version", std::string(kVersion));

  bool check = false;
  std::uint64_t seed = 20240101;
  app.add_flag("--check", check, "run the invariant self-test suite (no sweep)");
  app.add_option("--seed", seed, "seed for the randomized self-tests");

  std::string config_path;
  std::string precision_override;
  std::string out_override;
  bool plots = false;
  int threads = -1;
  auto* run_cmd = app.add_subcommand("run", "run a sweep from a config file");
  run_cmd->add_option("config", config_path, "JSON configuration file")
      ->required();
  run_cmd->add_option("--precision", precision_override,
                      "working precision: double|dd|qd|auto");
  run_cmd->add_option("--out", out_override, "output directory");
  run_cmd->add_flag("--plots", plots, "emit SVG band diagrams");
  run_cmd->add_option("--threads", threads, "sweep worker threads (0 = auto)");

  CLI11_PARSE(app, argc, argv);

  if (check) return cli::run_checks(seed);

  if (!run_cmd->parsed()) {
    std::fputs(app.help().c_str(), stdout);
    return cli::kExitConfig;
  }

  cli::RunConfig rc;
  try {
    rc = cli::parse_config(config_path);
    if (!precision_override.empty()) {
      rc.sweep.precision.mode = cli::parse_precision(precision_override);
      rc.effective["precision"] = precision_override;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return cli::kExitConfig;
  }
  if (!out_override.empty()) rc.out_dir = out_override;
  if (plots) rc.plots = true;
  if (threads >= 0) rc.sweep.threads = threads;

  cli::RunArtifacts art;
  try {
    art = cli::run(rc);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cli::kExitNumeric;
  }
  if (!art.message.empty()) std::fprintf(stderr, "%s\n", art.message.c_str());
  for (const auto& f : art.files) std::printf("wrote %s\n", f.c_str());
  return art.exit_code;
}
