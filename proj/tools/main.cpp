#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "alber/errors.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Mixed-state NLS experiments on the torus"};
  app.set_version_flag("--version", alber::lab::kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  for (const char* name : {"simulate", "penrose", "perturb", "inequalities", "convergence"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--seed", seed, "Override the configured seed");
    sub->add_option("--out", out_dir, "Override the output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : alber::lab::kConfigError;
  }

  alber::lab::RunConfig cfg;
  try {
    cfg = alber::lab::load_config(config_path);
    if (seed) {
      cfg.seed = *seed;
      cfg.inequalities.ensemble.seed = *seed;
    }
    if (out_dir) cfg.output_dir = *out_dir;
  } catch (const alber::Error& e) {
    std::cerr << "alber-lab: " << e.what() << "\n";
    return alber::lab::kConfigError;
  }
  return alber::lab::run_subcommand(app.get_subcommands().front()->get_name(), cfg);
}
