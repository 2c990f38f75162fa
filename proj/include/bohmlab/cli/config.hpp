#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bohmlab/protect.hpp"

namespace bohmlab::cli {

struct InitialStateConfig {
  enum class Type { Ground, Gaussian };
  Type type = Type::Ground;
  double sigma = 1.0;
  double center = 0.0;
};

struct SweepConfig {
  std::vector<double> lambdas{0.05, 0.025, 0.0125};
  std::vector<double> total_times{200.0};
};

// Everything a subcommand needs, with canonical defaults. Mirrors the JSON
// config document (flat plus one level of sections, unknown keys rejected).
struct RunConfig {
  ProtectiveConfig protective;
  int eigen_count = 4;
  int refine_factor = 1;
  InitialStateConfig initial_state;
  bool dump_density = false;
  SweepConfig sweep;
};

// Canonical protective experiment (the shipped defaults).
RunConfig default_config();

// Deliberately non-adiabatic defaults for lemma-check: sin^2 ramp, T = 5,
// lambda = 0.5, stride-1 frames, 9 equispaced quantiles.
RunConfig lemma_config();

// Applies a parsed JSON document on top of `base`. Strict: unknown keys and
// wrong types are ConfigErrors naming the offending key.
RunConfig parse_config(const nlohmann::json& doc, RunConfig base);

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base);

// Resolved-config echo (deterministic key order).
nlohmann::json config_to_json(const RunConfig& config);

// Applies refine_factor f: n -> (n-1)f+1, dt -> dt/f, substeps -> substeps*f.
void apply_refine(RunConfig& config);

}  // namespace bohmlab::cli
