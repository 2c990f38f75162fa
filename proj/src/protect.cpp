#include "bohmlab/protect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bohmlab/errors.hpp"
#include "bohmlab/spectral.hpp"

namespace bohmlab {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

double trapezoid_time_average(const std::vector<double>& times,
                              const std::vector<double>& values) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    acc += 0.5 * (values[k] + values[k + 1]) * (times[k + 1] - times[k]);
  }
  return acc / (times.back() - times.front());
}

}  // namespace

Observable Observable::position() {
  Observable o;
  o.kind = Kind::Position;
  return o;
}

Observable Observable::indicator(double a, double b) {
  if (!(a < b)) throw InvalidIntervalError("indicator: need a < b");
  Observable o;
  o.kind = Kind::Indicator;
  o.a = a;
  o.b = b;
  return o;
}

Observable Observable::custom(std::function<double(double)> f) {
  Observable o;
  o.kind = Kind::Custom;
  o.fn = std::move(f);
  return o;
}

double Observable::operator()(double x) const {
  switch (kind) {
    case Kind::Position:
      return x;
    case Kind::Indicator:
      return (x >= a && x <= b) ? 1.0 : 0.0;
    case Kind::Custom:
      return fn(x);
  }
  return 0.0;
}

double time_average(const Trajectory& traj, const Observable& f) {
  if (traj.positions.size() < 2) {
    throw EmptyTrajectoryError("time_average: need at least 2 samples");
  }
  std::vector<double> values(traj.positions.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = f(traj.positions[k]);
  return trapezoid_time_average(traj.times, values);
}

double ensemble_average(const DensityFields& fields, const Observable& f) {
  if (f.kind == Observable::Kind::Indicator) {
    return interval_probability(fields, f.a, f.b);
  }
  const Grid& g = fields.grid;
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double w = (i == 0 || i + 1 == g.n) ? 0.5 : 1.0;
    acc += w * f(g.x(i)) * fields.rho[u];
  }
  return acc * g.dx;
}

Bump build_bump(const Grid& grid, double center, double width) {
  if (!(width > 0.0)) throw BumpOutsideGridError("build_bump: width must be positive");
  const double lo = center - 3.0 * width;
  const double hi = center + 3.0 * width;
  if (!(lo > grid.x_min && hi < grid.x_max)) {
    throw BumpOutsideGridError("build_bump: support [center - 3w, center + 3w] leaves the grid");
  }
  Bump bump;
  bump.lo = lo;
  bump.hi = hi;
  bump.sample.grid = grid;
  bump.sample.v.assign(static_cast<std::size_t>(grid.n), 0.0);
  for (int i = 0; i < grid.n; ++i) {
    const double u = grid.x(i) - center;
    if (std::abs(u) <= 3.0 * width) {
      bump.sample.v[static_cast<std::size_t>(i)] = std::exp(-0.5 * u * u / (width * width));
    }
  }
  return bump;
}

PotentialSample base_potential(const GridSpec& grid_spec, const BasePotentialSpec& base) {
  const Grid grid = build_grid(grid_spec.x_min, grid_spec.x_max, grid_spec.n);
  switch (base.family) {
    case BasePotentialSpec::Family::Harmonic:
      return harmonic_potential(grid, base.k, base.center);
    case BasePotentialSpec::Family::Box:
      return box_potential(grid);
  }
  return box_potential(grid);
}

PotentialSchedule make_schedule(const ProtectiveConfig& config) {
  PotentialSchedule sched;
  sched.base = base_potential(config.grid, config.base);
  const Bump bump = build_bump(sched.base.grid, config.bump_center, config.bump_width);
  sched.bump = bump.sample;
  sched.interval_lo = bump.lo;
  sched.interval_hi = bump.hi;
  sched.lambda = config.lambda;
  sched.ramp.shape = config.ramp_shape;
  sched.ramp.total_time = config.total_time;
  return sched;
}

namespace {

ExperimentReport run_protective_impl(const ProtectiveConfig& config,
                                     const Wavefunction* initial_state) {
  ExperimentReport rep;
  rep.config = config;

  const PotentialSchedule sched = stage("schedule", [&] { return make_schedule(config); });

  const SpectralResult low_pair =
      stage("spectral", [&] { return eigenstates(sched.base, 2, config.consts); });
  rep.e0 = low_pair.energies[0];
  rep.e1 = low_pair.energies[1];
  rep.gap = rep.e1 - rep.e0;
  const double bump_peak = *std::max_element(sched.bump.v.begin(), sched.bump.v.end());
  rep.weakness_ratio = std::abs(config.lambda) * bump_peak / rep.gap;
  rep.weakness_warning = rep.weakness_ratio > 0.2;

  const Wavefunction& psi0 = initial_state ? *initial_state : low_pair.states[0];
  if (initial_state && !initial_state->grid.same_as(sched.base.grid)) {
    throw PipelineError("initial-state", "initial state grid does not match config grid");
  }
  rep.boundary_ok = boundary_amplitude(psi0) < 1e-6;

  rep.interval_lo = config.interval ? config.interval->first : sched.interval_lo;
  rep.interval_hi = config.interval ? config.interval->second : sched.interval_hi;
  if (!(rep.interval_lo < rep.interval_hi) || rep.interval_lo < sched.base.grid.x_min ||
      rep.interval_hi > sched.base.grid.x_max) {
    throw PipelineError("interval", "crossing interval must lie inside the grid");
  }

  PropagateOptions opt;
  opt.dt = config.numerics.dt;
  opt.store_stride = config.numerics.frame_stride;
  opt.fidelity_stride = config.numerics.fidelity_stride;
  opt.max_dt_ratio = config.numerics.max_dt_ratio;
  rep.trace = stage("propagate", [&] { return propagate(psi0, sched, opt, config.consts); });

  const EnsembleSpec spec = config.ensemble.sampled
                                ? EnsembleSpec::sampled(config.ensemble.count, config.ensemble.seed)
                                : EnsembleSpec::equispaced(config.ensemble.count);

  std::vector<Trajectory> quantile_trajs, ode_trajs;
  if (config.run_quantile) {
    quantile_trajs = stage("ensemble", [&] {
      return run_ensemble(spec, rep.trace, TrajectoryMethod::QuantileOracle,
                          config.numerics.substeps, config.jobs);
    });
  }
  if (config.run_ode) {
    ode_trajs = stage("ensemble", [&] {
      return run_ensemble(spec, rep.trace, TrajectoryMethod::VelocityOde,
                          config.numerics.substeps, config.jobs);
    });
  }

  stage("aggregate", [&] {
    const Observable ind = Observable::indicator(rep.interval_lo, rep.interval_hi);
    rep.initial_interval_mass =
        interval_probability(rep.trace.frames.front(), rep.interval_lo, rep.interval_hi);

    rep.frame_interval_prob.resize(rep.trace.frames.size());
    for (std::size_t k = 0; k < rep.trace.frames.size(); ++k) {
      rep.frame_interval_prob[k] = ensemble_average(rep.trace.frames[k], ind);
    }
    rep.time_avg_interval_prob = trapezoid_time_average(rep.trace.times, rep.frame_interval_prob);
    rep.min_interval_prob =
        *std::min_element(rep.frame_interval_prob.begin(), rep.frame_interval_prob.end());
    rep.final_interval_prob = rep.frame_interval_prob.back();

    rep.min_fidelity = rep.trace.min_fidelity();
    rep.final_fidelity = rep.trace.final_fidelity();
    rep.max_norm_drift = rep.trace.max_norm_drift();

    rep.max_quantile_drift = config.run_ode ? 0.0 : kNan;
    rep.max_dual_sup_diff = (config.run_ode && config.run_quantile) ? 0.0 : kNan;
    rep.fraction_never_entered_quantile = config.run_quantile ? 0.0 : kNan;
    rep.fraction_never_entered_ode = config.run_ode ? 0.0 : kNan;

    auto add_stats = [&](const std::vector<Trajectory>& trajs) {
      int never = 0;
      for (std::size_t i = 0; i < trajs.size(); ++i) {
        const Trajectory& tr = trajs[i];
        TrajectoryStats st;
        st.p0 = tr.p0;
        st.method = tr.method;
        st.x0 = tr.positions.front();
        const CrossingReport cr = crossing_report(tr, rep.interval_lo, rep.interval_hi);
        st.entered = cr.entered;
        st.first_entry = cr.first_entry.value_or(kNan);
        st.occupancy_fraction = cr.occupancy_fraction;
        st.time_avg_indicator = time_average(tr, ind);
        for (double x : tr.positions) st.max_drift = std::max(st.max_drift, std::abs(x - st.x0));
        st.return_diff = std::abs(tr.positions.back() - st.x0);
        st.max_quantile_drift = quantile_drift(tr, rep.trace);
        st.clamp_events = tr.clamp_events;
        st.sup_diff = kNan;
        if (config.run_ode && config.run_quantile && tr.method == TrajectoryMethod::VelocityOde) {
          const Trajectory& other = quantile_trajs[i];
          double sup = 0.0;
          for (std::size_t k = 0; k < tr.positions.size(); ++k) {
            sup = std::max(sup, std::abs(tr.positions[k] - other.positions[k]));
          }
          st.sup_diff = sup;
          rep.max_dual_sup_diff = std::max(rep.max_dual_sup_diff, sup);
        }
        if (!st.entered) ++never;
        rep.max_position_drift = std::max(rep.max_position_drift, st.max_drift);
        rep.max_return_diff = std::max(rep.max_return_diff, st.return_diff);
        if (tr.method == TrajectoryMethod::VelocityOde) {
          rep.max_quantile_drift = std::max(rep.max_quantile_drift, st.max_quantile_drift);
        }
        rep.clamp_events_total += tr.clamp_events;
        rep.stats.push_back(st);
      }
      return trajs.empty() ? 0.0
                           : static_cast<double>(never) / static_cast<double>(trajs.size());
    };

    const double frac_q = add_stats(quantile_trajs);
    const double frac_o = add_stats(ode_trajs);
    if (config.run_quantile) rep.fraction_never_entered_quantile = frac_q;
    if (config.run_ode) rep.fraction_never_entered_ode = frac_o;
    // quantile oracle is the designated reference method
    rep.fraction_never_entered = config.run_quantile ? frac_q : frac_o;

    rep.trajectories.reserve(quantile_trajs.size() + ode_trajs.size());
    for (auto& tr : quantile_trajs) rep.trajectories.push_back(std::move(tr));
    for (auto& tr : ode_trajs) rep.trajectories.push_back(std::move(tr));
    return 0;
  });

  return rep;
}

}  // namespace

ExperimentReport run_protective(const ProtectiveConfig& config) {
  return run_protective_impl(config, nullptr);
}

ExperimentReport run_protective_with_state(const ProtectiveConfig& config,
                                           const Wavefunction& psi0) {
  return run_protective_impl(config, &psi0);
}

}  // namespace bohmlab
