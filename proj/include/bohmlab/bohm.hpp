#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bohmlab/evolve.hpp"
#include "bohmlab/fields.hpp"

namespace bohmlab {

enum class TrajectoryMethod { VelocityOde, QuantileOracle };

std::string method_name(TrajectoryMethod m);

// Single Bohmian path sampled at the trace's stored frame times.
struct Trajectory {
  double p0 = 0.5;
  TrajectoryMethod method = TrajectoryMethod::QuantileOracle;
  std::vector<double> times;
  std::vector<double> positions;
  int clamp_events = 0;  // wall clamps during integration
};

// Initial quantiles of an ensemble: equispaced i/(N+1) or seeded uniform
// draws, always ascending and inside (0,1).
struct EnsembleSpec {
  std::vector<double> quantiles;
  std::uint64_t seed = 1;

  static EnsembleSpec equispaced(int count);
  static EnsembleSpec sampled(int count, std::uint64_t seed);
};

// v = j / max(rho, eps) with rho and j linearly interpolated to x.
// eps <= 0 selects the default relative floor 1e-12 * max(rho).
// Throws OutOfGridError when x lies outside the grid.
double velocity(const DensityFields& fields, double x, double eps = 0.0);

// Classical RK4 across one frame interval, (rho, j) blended linearly in
// time between the two frames. Result clamped to the grid; a clamp bumps
// *clamp_events when given.
double advance(double x, double t0, const DensityFields& f0, double t1,
               const DensityFields& f1, int substeps, int* clamp_events = nullptr);

// Integrates dx/dt = j/rho from x0 = quantile(frames[0], p0).
Trajectory trajectory_ode(double p0, const EvolutionTrace& trace, int substeps);

// The quantile-conservation route: x_k = quantile(frames[k], p0) at every
// stored frame. Reference method in dual-method disagreements.
Trajectory trajectory_quantile(double p0, const EvolutionTrace& trace);

// One trajectory per quantile; deterministic given the spec; trajectories
// run concurrently (jobs = 0 picks hardware concurrency).
std::vector<Trajectory> run_ensemble(const EnsembleSpec& spec, const EvolutionTrace& trace,
                                     TrajectoryMethod method, int substeps, int jobs = 0);

// Final positions only; memory-lean variant for large ensembles.
std::vector<double> ensemble_final_positions(const EnsembleSpec& spec,
                                             const EvolutionTrace& trace,
                                             TrajectoryMethod method, int substeps,
                                             int jobs = 0);

struct CrossingReport {
  bool entered = false;
  std::optional<double> first_entry;
  double occupancy_fraction = 0.0;  // trapezoid-weighted time fraction in [a,b]
};

// Throws InvalidIntervalError unless a < b and [a,b] lies within the grid.
CrossingReport crossing_report(const Trajectory& traj, double a, double b);

// max_k |P_{psi(t_k)}[x < x_k] - p0|; the Lemma restated for an
// independently integrated path.
double quantile_drift(const Trajectory& traj, const EvolutionTrace& trace);

}  // namespace bohmlab
