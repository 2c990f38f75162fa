#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "bohmlab/cli/config.hpp"

namespace bohmlab::cli {

struct CliOptions {
  std::optional<std::filesystem::path> config_path;
  std::filesystem::path out_root = "bohmlab_out";
  int jobs = 0;
  std::string method_override;  // "", "ode", "quantile", "both"
  std::optional<std::uint64_t> seed_override;
  bool plot = false;
};

// --out flag beats BOHMLAB_OUT beats ./bohmlab_out.
std::filesystem::path resolve_out_root(const std::optional<std::string>& out_flag);

int cmd_eigen(const CliOptions& opt);
int cmd_evolve(const CliOptions& opt);
int cmd_trajectories(const CliOptions& opt);
int cmd_protect(const CliOptions& opt);
int cmd_lemma_check(const CliOptions& opt);
int cmd_sweep(const CliOptions& opt);

enum class PlotKind { Protect, Trajectories, Lemma };

// Writes plot.py (matplotlib, reads the run's CSV files) into run_dir.
// Script generation only; nothing is rendered in-process.
void emit_plot_script(PlotKind kind, const std::filesystem::path& run_dir);

}  // namespace bohmlab::cli
