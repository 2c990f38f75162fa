#include "bohmlab/cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>

#include "bohmlab/cli/io.hpp"
#include "bohmlab/errors.hpp"
#include "bohmlab/parallel.hpp"
#include "bohmlab/spectral.hpp"

namespace bohmlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RunConfig load_for(const CliOptions& opt, RunConfig base) {
  RunConfig cfg = opt.config_path ? load_config_file(*opt.config_path, std::move(base))
                                  : std::move(base);
  if (!opt.method_override.empty()) {
    ProtectiveConfig& p = cfg.protective;
    if (opt.method_override == "ode") {
      p.run_ode = true;
      p.run_quantile = false;
    } else if (opt.method_override == "quantile") {
      p.run_ode = false;
      p.run_quantile = true;
    } else if (opt.method_override == "both") {
      p.run_ode = p.run_quantile = true;
    } else {
      throw ConfigError("unknown method: " + opt.method_override);
    }
  }
  if (opt.seed_override) cfg.protective.ensemble.seed = *opt.seed_override;
  cfg.protective.jobs = opt.jobs;
  return cfg;
}

fs::path make_run_dir(const CliOptions& opt, const std::string& run_id) {
  const fs::path dir = opt.out_root / run_id;
  fs::create_directories(dir);
  return dir;
}

void write_config_echo(const fs::path& dir, const RunConfig& cfg) {
  write_text_file(dir / "config_echo.json", config_to_json(cfg).dump(2) + "\n");
}

Wavefunction make_initial_state(const RunConfig& cfg, const PotentialSchedule& sched) {
  if (cfg.initial_state.type == InitialStateConfig::Type::Gaussian) {
    return gaussian_packet(sched.base.grid, cfg.initial_state.sigma, cfg.initial_state.center);
  }
  return ground_state(sched.base, cfg.protective.consts).second;
}

// frames.csv: t,norm,fidelity,interval_prob (fidelity "nan" off the
// fidelity sampling stride)
void write_frames_csv(const fs::path& dir, const EvolutionTrace& trace, double lo, double hi) {
  std::string out = "t,norm,fidelity,interval_prob\n";
  std::size_t fid_idx = 0;
  for (std::size_t k = 0; k < trace.frame_count(); ++k) {
    out += format_double(trace.times[k]);
    out += ',';
    out += format_double(trace.norms[k]);
    out += ',';
    if (fid_idx < trace.fid_times.size() && trace.fid_times[fid_idx] == trace.times[k]) {
      out += format_double(trace.fidelities[fid_idx]);
      ++fid_idx;
    } else {
      out += "nan";
    }
    out += ',';
    out += format_double(interval_probability(trace.frames[k], lo, hi));
    out += '\n';
  }
  write_text_file(dir / "frames.csv", out);
}

// trajectories.csv: run_id,p0,method,t,x (long format)
void write_trajectories_csv(const fs::path& dir, const std::string& run_id,
                            const std::vector<Trajectory>& trajectories) {
  std::string out = "run_id,p0,method,t,x\n";
  for (const Trajectory& tr : trajectories) {
    const std::string prefix = run_id + ',' + format_double(tr.p0) + ',' + method_name(tr.method);
    for (std::size_t k = 0; k < tr.positions.size(); ++k) {
      out += prefix;
      out += ',';
      out += format_double(tr.times[k]);
      out += ',';
      out += format_double(tr.positions[k]);
      out += '\n';
    }
  }
  write_text_file(dir / "trajectories.csv", out);
}

void write_stats_csv(const fs::path& dir, const std::string& run_id,
                     const std::vector<TrajectoryStats>& stats) {
  std::string out =
      "run_id,p0,method,x0,entered,first_entry,occupancy_fraction,time_avg_indicator,"
      "max_drift,return_diff,max_quantile_drift,sup_diff,clamp_events\n";
  for (const TrajectoryStats& st : stats) {
    out += run_id;
    out += ',';
    out += format_double(st.p0);
    out += ',';
    out += method_name(st.method);
    out += ',';
    out += format_double(st.x0);
    out += ',';
    out += st.entered ? "true" : "false";
    out += ',';
    out += format_double(st.first_entry);
    out += ',';
    out += format_double(st.occupancy_fraction);
    out += ',';
    out += format_double(st.time_avg_indicator);
    out += ',';
    out += format_double(st.max_drift);
    out += ',';
    out += format_double(st.return_diff);
    out += ',';
    out += format_double(st.max_quantile_drift);
    out += ',';
    out += format_double(st.sup_diff);
    out += ',';
    out += std::to_string(st.clamp_events);
    out += '\n';
  }
  write_text_file(dir / "trajectory_stats.csv", out);
}

// dual_method.csv: the two position columns per trajectory when both
// methods ran, plus their pointwise difference
void write_dual_csv(const fs::path& dir, const std::string& run_id,
                    const std::vector<Trajectory>& trajectories) {
  const std::size_t half = trajectories.size() / 2;
  std::string out = "run_id,p0,t,x_ode,x_quantile,abs_diff\n";
  for (std::size_t i = 0; i < half; ++i) {
    const Trajectory& tq = trajectories[i];
    const Trajectory& to = trajectories[half + i];
    for (std::size_t k = 0; k < tq.positions.size(); ++k) {
      out += run_id;
      out += ',';
      out += format_double(tq.p0);
      out += ',';
      out += format_double(tq.times[k]);
      out += ',';
      out += format_double(to.positions[k]);
      out += ',';
      out += format_double(tq.positions[k]);
      out += ',';
      out += format_double(std::abs(to.positions[k] - tq.positions[k]));
      out += '\n';
    }
  }
  write_text_file(dir / "dual_method.csv", out);
}

// density.csv: wide rho(x,t) table strided to at most ~200 rows
void write_density_csv(const fs::path& dir, const EvolutionTrace& trace) {
  const std::size_t frames = trace.frame_count();
  const std::size_t stride = std::max<std::size_t>(1, frames / 200);
  std::string out = "t";
  for (int i = 0; i < trace.grid.n; ++i) {
    out += ',';
    out += format_double(trace.grid.x(i));
  }
  out += '\n';
  for (std::size_t k = 0; k < frames; k += stride) {
    out += format_double(trace.times[k]);
    for (double r : trace.frames[k].rho) {
      out += ',';
      out += format_double(r);
    }
    out += '\n';
  }
  write_text_file(dir / "density.csv", out);
}

json summary_to_json(const ExperimentReport& rep, const RunConfig& cfg) {
  json doc;
  doc["config"] = config_to_json(cfg);
  doc["e0"] = rep.e0;
  doc["e1"] = rep.e1;
  doc["gap"] = rep.gap;
  doc["weakness_ratio"] = rep.weakness_ratio;
  doc["weakness_warning"] = rep.weakness_warning;
  doc["boundary_ok"] = rep.boundary_ok;
  doc["interval_lo"] = rep.interval_lo;
  doc["interval_hi"] = rep.interval_hi;
  doc["initial_interval_mass"] = rep.initial_interval_mass;
  doc["fraction_never_entered"] = rep.fraction_never_entered;
  doc["fraction_never_entered_quantile"] = rep.fraction_never_entered_quantile;
  doc["fraction_never_entered_ode"] = rep.fraction_never_entered_ode;
  doc["time_avg_interval_prob"] = rep.time_avg_interval_prob;
  doc["min_interval_prob"] = rep.min_interval_prob;
  doc["final_interval_prob"] = rep.final_interval_prob;
  doc["min_fidelity"] = rep.min_fidelity;
  doc["final_fidelity"] = rep.final_fidelity;
  doc["max_quantile_drift"] = rep.max_quantile_drift;
  doc["max_position_drift"] = rep.max_position_drift;
  doc["max_return_diff"] = rep.max_return_diff;
  doc["max_dual_sup_diff"] = rep.max_dual_sup_diff;
  doc["max_norm_drift"] = rep.max_norm_drift;
  doc["clamp_events_total"] = rep.clamp_events_total;
  doc["frames_stored"] = rep.trace.frame_count();
  doc["trajectory_count"] = rep.trajectories.size();
  return doc;
}

void write_protect_outputs(const fs::path& dir, const RunConfig& cfg,
                           const ExperimentReport& rep, bool with_summary, bool plot,
                           PlotKind kind) {
  const std::string& run_id = cfg.protective.run_id;
  write_trajectories_csv(dir, run_id, rep.trajectories);
  write_frames_csv(dir, rep.trace, rep.interval_lo, rep.interval_hi);
  write_stats_csv(dir, run_id, rep.stats);
  if (cfg.protective.run_ode && cfg.protective.run_quantile) {
    write_dual_csv(dir, run_id, rep.trajectories);
  }
  if (with_summary) {
    write_text_file(dir / "summary.json", summary_to_json(rep, cfg).dump(2) + "\n");
  }
  if (plot || cfg.dump_density) write_density_csv(dir, rep.trace);
  if (plot) emit_plot_script(kind, dir);
  write_config_echo(dir, cfg);
  if (rep.weakness_warning) {
    std::cerr << "warning: weakness ratio " << rep.weakness_ratio
              << " exceeds 0.2; the perturbation is not weak relative to the gap\n";
  }
  if (!rep.boundary_ok) {
    std::cerr << "warning: initial state carries > 1e-6 amplitude at the box walls\n";
  }
}

}  // namespace

fs::path resolve_out_root(const std::optional<std::string>& out_flag) {
  if (out_flag && !out_flag->empty()) return fs::path(*out_flag);
  if (const char* env = std::getenv("BOHMLAB_OUT"); env && *env) return fs::path(env);
  return fs::path("bohmlab_out");
}

int cmd_eigen(const CliOptions& opt) {
  RunConfig base = default_config();
  base.protective.run_id = "eigen";
  const RunConfig cfg = load_for(opt, std::move(base));
  const PotentialSample v0 = base_potential(cfg.protective.grid, cfg.protective.base);
  const SpectralResult result = eigenstates(v0, cfg.eigen_count, cfg.protective.consts);

  const fs::path dir = make_run_dir(opt, cfg.protective.run_id);
  std::string ev = "index,energy\n";
  for (std::size_t q = 0; q < result.energies.size(); ++q) {
    ev += std::to_string(q);
    ev += ',';
    ev += format_double(result.energies[q]);
    ev += '\n';
  }
  write_text_file(dir / "eigenvalues.csv", ev);

  std::string st = "x";
  for (std::size_t q = 0; q < result.states.size(); ++q) {
    st += ",psi_" + std::to_string(q);
  }
  st += '\n';
  for (int i = 0; i < v0.grid.n; ++i) {
    st += format_double(v0.grid.x(i));
    for (const auto& state : result.states) {
      st += ',';
      st += format_double(state.amp[static_cast<std::size_t>(i)].real());
    }
    st += '\n';
  }
  write_text_file(dir / "eigenstates.csv", st);
  write_config_echo(dir, cfg);
  return 0;
}

int cmd_evolve(const CliOptions& opt) {
  RunConfig base = default_config();
  base.protective.run_id = "evolve";
  const RunConfig cfg = load_for(opt, std::move(base));
  const ProtectiveConfig& p = cfg.protective;

  const PotentialSchedule sched = make_schedule(p);
  const Wavefunction psi0 = make_initial_state(cfg, sched);
  PropagateOptions popt;
  popt.dt = p.numerics.dt;
  popt.store_stride = p.numerics.frame_stride;
  popt.fidelity_stride = p.numerics.fidelity_stride;
  popt.max_dt_ratio = p.numerics.max_dt_ratio;
  const EvolutionTrace trace = propagate(psi0, sched, popt, p.consts);

  const fs::path dir = make_run_dir(opt, p.run_id);
  const double lo = p.interval ? p.interval->first : sched.interval_lo;
  const double hi = p.interval ? p.interval->second : sched.interval_hi;
  write_frames_csv(dir, trace, lo, hi);

  std::string fin = "x,re,im\n";
  for (int i = 0; i < trace.grid.n; ++i) {
    const auto& a = trace.psi_final.amp[static_cast<std::size_t>(i)];
    fin += format_double(trace.grid.x(i));
    fin += ',';
    fin += format_double(a.real());
    fin += ',';
    fin += format_double(a.imag());
    fin += '\n';
  }
  write_text_file(dir / "final_state.csv", fin);
  if (cfg.dump_density) write_density_csv(dir, trace);
  write_config_echo(dir, cfg);
  return 0;
}

int cmd_trajectories(const CliOptions& opt) {
  RunConfig base = default_config();
  base.protective.run_id = "trajectories";
  const RunConfig cfg = load_for(opt, std::move(base));

  ExperimentReport rep;
  if (cfg.initial_state.type == InitialStateConfig::Type::Gaussian) {
    const PotentialSchedule sched = make_schedule(cfg.protective);
    const Wavefunction psi0 = make_initial_state(cfg, sched);
    rep = run_protective_with_state(cfg.protective, psi0);
  } else {
    rep = run_protective(cfg.protective);
  }
  const fs::path dir = make_run_dir(opt, cfg.protective.run_id);
  write_protect_outputs(dir, cfg, rep, /*with_summary=*/false, opt.plot,
                        PlotKind::Trajectories);
  return 0;
}

int cmd_protect(const CliOptions& opt) {
  const RunConfig cfg = load_for(opt, default_config());
  const ExperimentReport rep = run_protective(cfg.protective);
  const fs::path dir = make_run_dir(opt, cfg.protective.run_id);
  write_protect_outputs(dir, cfg, rep, /*with_summary=*/true, opt.plot, PlotKind::Protect);
  return 0;
}

int cmd_lemma_check(const CliOptions& opt) {
  RunConfig cfg = load_for(opt, lemma_config());
  if (!(cfg.protective.run_ode && cfg.protective.run_quantile)) {
    throw ConfigError("lemma-check requires method=both");
  }
  apply_refine(cfg);
  const ExperimentReport rep = run_protective(cfg.protective);
  const fs::path dir = make_run_dir(opt, cfg.protective.run_id);

  std::string out = "run_id,p0,sup_diff,max_quantile_drift\n";
  for (const TrajectoryStats& st : rep.stats) {
    if (st.method != TrajectoryMethod::VelocityOde) continue;
    out += cfg.protective.run_id;
    out += ',';
    out += format_double(st.p0);
    out += ',';
    out += format_double(st.sup_diff);
    out += ',';
    out += format_double(st.max_quantile_drift);
    out += '\n';
  }
  write_text_file(dir / "lemma.csv", out);
  write_protect_outputs(dir, cfg, rep, /*with_summary=*/true, opt.plot, PlotKind::Lemma);
  return 0;
}

int cmd_sweep(const CliOptions& opt) {
  RunConfig base = default_config();
  base.protective.run_id = "sweep";
  const RunConfig cfg = load_for(opt, std::move(base));

  struct Combo {
    double lambda;
    double total_time;
    std::string name;
  };
  std::vector<Combo> combos;
  int idx = 0;
  for (double T : cfg.sweep.total_times) {
    for (double lam : cfg.sweep.lambdas) {
      char tag[16];
      std::snprintf(tag, sizeof(tag), "run_%03d", idx++);
      combos.push_back({lam, T, tag});
    }
  }

  const fs::path dir = make_run_dir(opt, cfg.protective.run_id);
  std::vector<json> rows(combos.size());
  parallel_for(combos.size(), std::max(1, opt.jobs), [&](std::size_t i) {
    RunConfig sub = cfg;
    sub.protective.lambda = combos[i].lambda;
    sub.protective.total_time = combos[i].total_time;
    sub.protective.run_id = combos[i].name;
    sub.protective.jobs = 1;
    const ExperimentReport rep = run_protective(sub.protective);
    const fs::path sub_dir = dir / combos[i].name;
    fs::create_directories(sub_dir);
    write_protect_outputs(sub_dir, sub, rep, /*with_summary=*/true, false, PlotKind::Protect);
    json row;
    row["run_id"] = combos[i].name;
    row["lambda"] = combos[i].lambda;
    row["total_time"] = combos[i].total_time;
    row["initial_interval_mass"] = rep.initial_interval_mass;
    row["fraction_never_entered"] = rep.fraction_never_entered;
    row["time_avg_interval_prob"] = rep.time_avg_interval_prob;
    row["min_fidelity"] = rep.min_fidelity;
    row["final_fidelity"] = rep.final_fidelity;
    row["max_position_drift"] = rep.max_position_drift;
    row["max_return_diff"] = rep.max_return_diff;
    row["max_quantile_drift"] = rep.max_quantile_drift;
    row["max_norm_drift"] = rep.max_norm_drift;
    row["weakness_ratio"] = rep.weakness_ratio;
    rows[i] = std::move(row);
  });

  std::string out =
      "run_id,lambda,total_time,initial_interval_mass,fraction_never_entered,"
      "time_avg_interval_prob,min_fidelity,final_fidelity,max_position_drift,"
      "max_return_diff,max_quantile_drift,max_norm_drift,weakness_ratio\n";
  for (const json& row : rows) {
    out += row.at("run_id").get<std::string>();
    for (const char* key : {"lambda", "total_time", "initial_interval_mass",
                            "fraction_never_entered", "time_avg_interval_prob", "min_fidelity",
                            "final_fidelity", "max_position_drift", "max_return_diff",
                            "max_quantile_drift", "max_norm_drift", "weakness_ratio"}) {
      out += ',';
      out += format_double(row.at(key).get<double>());
    }
    out += '\n';
  }
  write_text_file(dir / "sweep.csv", out);
  write_config_echo(dir, cfg);
  return 0;
}

}  // namespace bohmlab::cli
