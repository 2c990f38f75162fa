#include <CLI11.hpp>

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "bohmlab/cli/commands.hpp"
#include "bohmlab/errors.hpp"

namespace cli = bohmlab::cli;

int main(int argc, char** argv) {
  CLI::App app{"bohmlab: 1D Bohmian-mechanics simulation laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag;
  std::string method;
  int jobs = 0;
  std::optional<std::uint64_t> seed;
  bool plot = false;

  app.add_option("--config", config_path, "JSON config file (defaults apply when omitted)");
  app.add_option("--out", out_flag, "output root directory (overrides BOHMLAB_OUT)");
  app.add_option("--jobs", jobs, "max concurrent workers (0 = hardware)");
  app.add_option("--method", method, "trajectory method: ode | quantile | both")
      ->check(CLI::IsMember({"ode", "quantile", "both"}));
  app.add_option("--seed", seed, "override ensemble seed");
  app.add_flag("--plot", plot, "emit a plot.py script (and density.csv) with the run");

  std::function<int(const cli::CliOptions&)> runner;
  app.add_subcommand("eigen", "bound states of the base potential")
      ->callback([&] { runner = cli::cmd_eigen; });
  app.add_subcommand("evolve", "propagate under the scheduled potential")
      ->callback([&] { runner = cli::cmd_evolve; });
  app.add_subcommand("trajectories", "propagate and integrate a trajectory ensemble")
      ->callback([&] { runner = cli::cmd_trajectories; });
  app.add_subcommand("protect", "full protective-measurement experiment")
      ->callback([&] { runner = cli::cmd_protect; });
  app.add_subcommand("lemma-check", "dual-method quantile-conservation check, non-adiabatic")
      ->callback([&] { runner = cli::cmd_lemma_check; });
  app.add_subcommand("sweep", "protective experiments over (lambda, T) grids")
      ->callback([&] { runner = cli::cmd_sweep; });

  CLI11_PARSE(app, argc, argv);

  cli::CliOptions opt;
  if (!config_path.empty()) opt.config_path = config_path;
  opt.out_root = cli::resolve_out_root(out_flag.empty() ? std::nullopt
                                                        : std::optional<std::string>(out_flag));
  opt.jobs = jobs;
  opt.method_override = method;
  opt.seed_override = seed;
  opt.plot = plot;

  try {
    return runner(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
