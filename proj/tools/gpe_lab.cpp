// gpe_lab: ground-state solver laboratory for the 1D Gross-Pitaevskii problem.
//
//   gpe_lab solve|rates|spectrum|sweep [--config FILE] [--preset mp1|mp2]
//                                      [--out DIR] [--seed N]

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "gpe/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Ground-state solver laboratory for the 1D Gross-Pitaevskii problem"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "INI configuration file");
    cmd->add_option("--preset", preset, "model problem preset")
        ->check(CLI::IsMember({"mp1", "mp2"}));
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "seed of the random initial value");
  };
  auto* solve = app.add_subcommand("solve", "run one scheme to convergence");
  auto* rates = app.add_subcommand("rates", "per-iteration contraction rates (CSV)");
  auto* spectrum = app.add_subcommand("spectrum", "auxiliary eigenvalues and predicted rates");
  auto* sweep = app.add_subcommand("sweep", "observed vs predicted rates over a tau/sigma grid");
  for (auto* cmd : {solve, rates, spectrum, sweep}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gpe::cli::kConfigFailure;
  }

  gpe::RunSpec spec;
  try {
    const std::optional<std::string> preset_opt =
        preset.empty() ? std::nullopt : std::optional<std::string>(preset);
    if (!config_path.empty()) {
      spec = gpe::parse_config(config_path, preset_opt);
    } else if (preset_opt) {
      spec = gpe::preset_spec(*preset_opt);
    } else {
      std::cerr << "either --config or --preset is required\n";
      return gpe::cli::kConfigFailure;
    }
    if (!out_dir.empty()) spec.experiment.output = out_dir;
    if (seed) spec.scheme.seed = *seed;
    gpe::validate(spec);
  } catch (const gpe::Error& e) {
    std::cerr << e.what() << '\n';
    return gpe::cli::kConfigFailure;
  }

  if (*solve) return gpe::cli::cmd_solve(spec, std::cout, std::cerr);
  if (*rates) return gpe::cli::cmd_rates(spec, std::cout, std::cerr);
  if (*spectrum) return gpe::cli::cmd_spectrum(spec, std::cout, std::cerr);
  return gpe::cli::cmd_sweep(spec, std::cout, std::cerr);
}
