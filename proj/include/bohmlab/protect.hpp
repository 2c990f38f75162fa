#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bohmlab/bohm.hpp"
#include "bohmlab/constants.hpp"
#include "bohmlab/evolve.hpp"

namespace bohmlab {

// Observable on positions. The interval indicator gets the exact
// CDF-difference path in ensemble averages so that
// ensemble_average(indicator) == cdf(b) - cdf(a) identically.
struct Observable {
  enum class Kind { Position, Indicator, Custom };
  Kind kind = Kind::Position;
  double a = 0.0;
  double b = 0.0;
  std::function<double(double)> fn;

  static Observable position();
  static Observable indicator(double a, double b);
  static Observable custom(std::function<double(double)> f);

  double operator()(double x) const;
};

// Trapezoid-in-time average of f(x_k) along one trajectory.
// Throws EmptyTrajectoryError with fewer than 2 samples.
double time_average(const Trajectory& traj, const Observable& f);

// Integral of f(x) rho(x) dx (trapezoid; CDF difference for indicators).
double ensemble_average(const DensityFields& fields, const Observable& f);

// Unit-peak compactly-truncated Gaussian bump with declared support
// [center - 3 width, center + 3 width].
struct Bump {
  PotentialSample sample;
  double lo = 0.0;
  double hi = 0.0;
};

// Throws BumpOutsideGridError unless center +- 3 width lies inside the grid.
Bump build_bump(const Grid& grid, double center, double width);

struct BasePotentialSpec {
  enum class Family { Harmonic, Box };
  Family family = Family::Harmonic;
  double k = 1.0;        // harmonic stiffness
  double center = 0.0;   // harmonic center
};

struct GridSpec {
  double x_min = -12.0;
  double x_max = 12.0;
  int n = 2401;
};

struct EnsembleConfig {
  int count = 33;
  bool sampled = false;  // false: equispaced i/(count+1)
  std::uint64_t seed = 1;
};

struct NumericsConfig {
  double dt = 2e-3;
  int frame_stride = 50;
  int substeps = 4;
  int fidelity_stride = 10;  // in stored frames; 0 disables fidelity tracking
  double max_dt_ratio = 50.0;
};

// Canonical experiment by default: V0 = x^2/2 on [-12,12], n = 2401,
// unit-peak bump at 2.2 of width 0.25, lambda = 0.05, sin^2 ramp T = 200,
// dt = 2e-3, 33 equispaced quantiles.
struct ProtectiveConfig {
  GridSpec grid;
  PhysicalConstants consts;
  BasePotentialSpec base;
  double bump_center = 2.2;
  double bump_width = 0.25;
  double lambda = 0.05;
  RampSchedule::Shape ramp_shape = RampSchedule::Shape::SinSquared;
  double total_time = 200.0;
  EnsembleConfig ensemble;
  NumericsConfig numerics;
  bool run_ode = true;
  bool run_quantile = true;
  std::optional<std::pair<double, double>> interval;  // default: bump support
  std::string run_id = "protective";
  int jobs = 0;
};

struct TrajectoryStats {
  double p0 = 0.0;
  TrajectoryMethod method = TrajectoryMethod::QuantileOracle;
  double x0 = 0.0;
  bool entered = false;
  double first_entry = 0.0;  // NaN when never entered
  double occupancy_fraction = 0.0;
  double time_avg_indicator = 0.0;
  double max_drift = 0.0;    // max_k |x_k - x0|
  double return_diff = 0.0;  // |x(T) - x0|
  double max_quantile_drift = 0.0;
  double sup_diff = 0.0;  // sup_k |x_ode - x_quantile|; NaN unless both methods ran
  int clamp_events = 0;
};

struct ExperimentReport {
  ProtectiveConfig config;

  double e0 = 0.0, e1 = 0.0, gap = 0.0;
  double weakness_ratio = 0.0;
  bool weakness_warning = false;
  bool boundary_ok = true;

  double interval_lo = 0.0, interval_hi = 0.0;
  double initial_interval_mass = 0.0;

  double fraction_never_entered = 0.0;  // reference method (quantile oracle)
  double fraction_never_entered_quantile = 0.0;
  double fraction_never_entered_ode = 0.0;

  double time_avg_interval_prob = 0.0;
  double min_interval_prob = 0.0;
  double final_interval_prob = 0.0;

  double min_fidelity = 1.0;
  double final_fidelity = 1.0;

  double max_quantile_drift = 0.0;  // over velocity-ODE trajectories
  double max_position_drift = 0.0;
  double max_return_diff = 0.0;
  double max_dual_sup_diff = 0.0;  // NaN unless both methods ran
  double max_norm_drift = 0.0;
  int clamp_events_total = 0;

  std::vector<TrajectoryStats> stats;         // quantile method first, then ODE
  std::vector<Trajectory> trajectories;       // same order as stats
  std::vector<double> frame_interval_prob;    // per stored frame
  EvolutionTrace trace;
};

// ground_state -> propagate -> run_ensemble (both methods) -> crossing
// reports -> aggregation. Deterministic given the config. Errors carry the
// pipeline stage name.
ExperimentReport run_protective(const ProtectiveConfig& config);

// Same pipeline with a caller-supplied initial state instead of the ground
// state (weakness ratio still reports the base potential's gap).
ExperimentReport run_protective_with_state(const ProtectiveConfig& config,
                                           const Wavefunction& psi0);

// The schedule and base potential a config describes (shared with the CLI).
PotentialSample base_potential(const GridSpec& grid_spec, const BasePotentialSpec& base);
PotentialSchedule make_schedule(const ProtectiveConfig& config);

}  // namespace bohmlab
