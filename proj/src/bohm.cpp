#include "bohmlab/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bohmlab/errors.hpp"
#include "bohmlab/parallel.hpp"

namespace bohmlab {

namespace {

constexpr double kRelativeFloor = 1e-12;

void validate_quantiles(const EnsembleSpec& spec) {
  for (double p : spec.quantiles) {
    if (!(p > 0.0 && p < 1.0)) {
      throw OutOfRangeError("ensemble: quantile outside (0,1)");
    }
  }
}

void require_frames(const EvolutionTrace& trace) {
  if (trace.frames.empty()) throw MissingFrameError("trajectory: trace has no stored frames");
}

}  // namespace

std::string method_name(TrajectoryMethod m) {
  return m == TrajectoryMethod::VelocityOde ? "ode" : "quantile";
}

EnsembleSpec EnsembleSpec::equispaced(int count) {
  EnsembleSpec spec;
  spec.quantiles.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) {
    spec.quantiles.push_back(static_cast<double>(i) / static_cast<double>(count + 1));
  }
  return spec;
}

EnsembleSpec EnsembleSpec::sampled(int count, std::uint64_t seed) {
  EnsembleSpec spec;
  spec.seed = seed;
  spec.quantiles.reserve(static_cast<std::size_t>(count));
  std::mt19937_64 rng(seed);
  while (spec.quantiles.size() < static_cast<std::size_t>(count)) {
    // 53-bit mantissa draw in [0,1); platform-independent
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u > 0.0) spec.quantiles.push_back(u);
  }
  std::sort(spec.quantiles.begin(), spec.quantiles.end());
  return spec;
}

double velocity(const DensityFields& fields, double x, double eps) {
  const Grid& g = fields.grid;
  const double slack = 1e-12 * (g.x_max - g.x_min);
  if (x < g.x_min - slack || x > g.x_max + slack) {
    throw OutOfGridError("velocity: position outside grid");
  }
  const double rho = sample_linear(g, fields.rho, x);
  const double jj = sample_linear(g, fields.j, x);
  const double floor = eps > 0.0 ? eps : kRelativeFloor * fields.rho_max;
  return jj / std::max(rho, floor);
}

double advance(double x, double t0, const DensityFields& f0, double t1,
               const DensityFields& f1, int substeps, int* clamp_events) {
  if (!(t1 > t0)) throw MissingFrameError("advance: frames must be ordered in time");
  if (substeps < 1) throw OutOfRangeError("advance: substeps must be >= 1");
  const Grid& g = f0.grid;
  const double lo = g.x_min;
  const double hi = g.x_back();
  const double slack = 1e-12 * (g.x_max - g.x_min);
  if (x < lo - slack || x > hi + slack) throw OutOfGridError("advance: position outside grid");

  const double span = t1 - t0;
  const double floor = kRelativeFloor * std::max(f0.rho_max, f1.rho_max);
  auto vel = [&](double xx, double w) {
    xx = std::clamp(xx, lo, hi);
    const double rho = (1.0 - w) * sample_linear(g, f0.rho, xx) +
                       w * sample_linear(g, f1.rho, xx);
    const double jj = (1.0 - w) * sample_linear(g, f0.j, xx) +
                      w * sample_linear(g, f1.j, xx);
    return jj / std::max(rho, floor);
  };

  const double h = span / static_cast<double>(substeps);
  for (int s = 0; s < substeps; ++s) {
    const double w0 = static_cast<double>(s) / static_cast<double>(substeps);
    const double wh = (static_cast<double>(s) + 0.5) / static_cast<double>(substeps);
    const double w1 = static_cast<double>(s + 1) / static_cast<double>(substeps);
    const double k1 = vel(x, w0);
    const double k2 = vel(x + 0.5 * h * k1, wh);
    const double k3 = vel(x + 0.5 * h * k2, wh);
    const double k4 = vel(x + h * k3, w1);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (x < lo || x > hi) {
    x = std::clamp(x, lo, hi);
    if (clamp_events) ++(*clamp_events);
  }
  return x;
}

Trajectory trajectory_ode(double p0, const EvolutionTrace& trace, int substeps) {
  require_frames(trace);
  Trajectory traj;
  traj.p0 = p0;
  traj.method = TrajectoryMethod::VelocityOde;
  traj.times = trace.times;
  traj.positions.reserve(trace.frames.size());
  double x = quantile(trace.frames.front(), p0);
  traj.positions.push_back(x);
  for (std::size_t k = 0; k + 1 < trace.frames.size(); ++k) {
    x = advance(x, trace.times[k], trace.frames[k], trace.times[k + 1], trace.frames[k + 1],
                substeps, &traj.clamp_events);
    traj.positions.push_back(x);
  }
  return traj;
}

Trajectory trajectory_quantile(double p0, const EvolutionTrace& trace) {
  require_frames(trace);
  Trajectory traj;
  traj.p0 = p0;
  traj.method = TrajectoryMethod::QuantileOracle;
  traj.times = trace.times;
  traj.positions.reserve(trace.frames.size());
  for (const auto& f : trace.frames) traj.positions.push_back(quantile(f, p0));
  return traj;
}

std::vector<Trajectory> run_ensemble(const EnsembleSpec& spec, const EvolutionTrace& trace,
                                     TrajectoryMethod method, int substeps, int jobs) {
  validate_quantiles(spec);
  require_frames(trace);
  std::vector<Trajectory> out(spec.quantiles.size());
  parallel_for(spec.quantiles.size(), jobs, [&](std::size_t i) {
    const double p0 = spec.quantiles[i];
    out[i] = (method == TrajectoryMethod::VelocityOde) ? trajectory_ode(p0, trace, substeps)
                                                       : trajectory_quantile(p0, trace);
  });
  return out;
}

std::vector<double> ensemble_final_positions(const EnsembleSpec& spec,
                                             const EvolutionTrace& trace,
                                             TrajectoryMethod method, int substeps, int jobs) {
  validate_quantiles(spec);
  require_frames(trace);
  std::vector<double> out(spec.quantiles.size());
  if (method == TrajectoryMethod::QuantileOracle) {
    parallel_for(spec.quantiles.size(), jobs, [&](std::size_t i) {
      out[i] = quantile(trace.frames.back(), spec.quantiles[i]);
    });
    return out;
  }
  parallel_for(spec.quantiles.size(), jobs, [&](std::size_t i) {
    double x = quantile(trace.frames.front(), spec.quantiles[i]);
    for (std::size_t k = 0; k + 1 < trace.frames.size(); ++k) {
      x = advance(x, trace.times[k], trace.frames[k], trace.times[k + 1],
                  trace.frames[k + 1], substeps, nullptr);
    }
    out[i] = x;
  });
  return out;
}

CrossingReport crossing_report(const Trajectory& traj, double a, double b) {
  if (!(a < b)) throw InvalidIntervalError("crossing_report: need a < b");
  const auto& xs = traj.positions;
  const auto& ts = traj.times;
  CrossingReport rep;
  if (xs.empty()) return rep;
  auto inside = [&](double x) { return x >= a && x <= b; };
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (inside(xs[k])) {
      rep.entered = true;
      rep.first_entry = ts[k];
      break;
    }
  }
  if (xs.size() < 2) {
    rep.occupancy_fraction = inside(xs[0]) ? 1.0 : 0.0;
    return rep;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double g0 = inside(xs[k]) ? 1.0 : 0.0;
    const double g1 = inside(xs[k + 1]) ? 1.0 : 0.0;
    acc += 0.5 * (g0 + g1) * (ts[k + 1] - ts[k]);
  }
  rep.occupancy_fraction = acc / (ts.back() - ts.front());
  return rep;
}

double quantile_drift(const Trajectory& traj, const EvolutionTrace& trace) {
  double worst = 0.0;
  const std::size_t count = std::min(traj.positions.size(), trace.frames.size());
  for (std::size_t k = 0; k < count; ++k) {
    worst = std::max(worst, std::abs(cdf_at(trace.frames[k], traj.positions[k]) - traj.p0));
  }
  return worst;
}

}  // namespace bohmlab
