#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hypocns/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Hypo-viscous compressible Navier-Stokes decay experiments"};
  app.require_subcommand(1);

  hypocns::CliOptions options;
  auto add_common = [&options](CLI::App* cmd) {
    cmd->add_option("--config", options.config_path, "JSON run configuration");
    cmd->add_option("--out", options.out_dir, "output directory (overrides the config)");
    cmd->add_option("--plots", options.plots, "write decay.svg (true/false)");
  };

  auto* run = app.add_subcommand("run", "integrate one configuration, write trajectory and fits");
  auto* oracle = app.add_subcommand("oracle", "linear oracle: C_beta and the lower-bound check");
  auto* sweep = app.add_subcommand("sweep", "run the config's parameter grid");
  auto* fit = app.add_subcommand("fit", "re-fit a persisted trajectory.csv");
  for (auto* cmd : {run, oracle, sweep, fit}) add_common(cmd);
  sweep->add_option("--tolerance", options.tolerance, "allowed relative exponent gap")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--workers", options.workers, "concurrent runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hypocns::kExitConfig;
  }

  if (*run) return hypocns::cmd_run(options, std::cout, std::cerr);
  if (*oracle) return hypocns::cmd_oracle(options, std::cout, std::cerr);
  if (*sweep) return hypocns::cmd_sweep(options, std::cout, std::cerr);
  return hypocns::cmd_fit(options, std::cout, std::cerr);
}
