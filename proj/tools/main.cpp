#include <iostream>

#include <CLI11.hpp>

#include "cli/config.hpp"
#include "cli/runner.hpp"
#include "cli/selftest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Estimator linearity and stability certificates under Gaussian noise"};
  app.require_subcommand(1);

  gstab::cli::RunOptions opts;
  std::string scenario;
  auto* run = app.add_subcommand("run", "Run the scenarios of a config file");
  run->add_option("--config", opts.config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", opts.out_dir, "Output directory")->required();
  run->add_option("--jobs", opts.jobs, "Worker threads (default: available parallelism)");
  run->add_option("--scenario", scenario, "Run only this scenario");

  auto* self = app.add_subcommand("selftest", "Run the built-in invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!scenario.empty()) opts.scenario = scenario;
      return gstab::cli::run(opts, std::cout);
    }
    if (self->parsed()) {
      gstab::cli::RunConfig empty;
      return gstab::cli::selftest(gstab::cli::effective_seed(empty), std::cout);
    }
  } catch (const gstab::Error& e) {
    std::cerr << "gauss-stab: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
