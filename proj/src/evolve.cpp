#include "bohmlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "bohmlab/errors.hpp"
#include "bohmlab/spectral.hpp"

namespace bohmlab {

namespace {

double smoothstep01(double u) { return u * u * (3.0 - 2.0 * u); }

// Reusable Crank-Nicolson stepper (Thomas solve on the interior points).
struct CnWorkspace {
  std::vector<std::complex<double>> rhs, cp, dp;

  void advance(Wavefunction& psi, const PotentialSample& v_mid, double dt,
               const PhysicalConstants& consts) {
    const Grid& g = psi.grid;
    const std::size_t n = psi.amp.size();
    const std::size_t m = n - 2;
    rhs.resize(m);
    cp.resize(m);
    dp.resize(m);

    const double kin = consts.hbar * consts.hbar / (2.0 * consts.mass * g.dx * g.dx);
    const double gamma = dt / (2.0 * consts.hbar);
    const std::complex<double> ig(0.0, gamma);
    const std::complex<double> off = -ig * kin;

    auto& a = psi.amp;
    // rhs = (1 - i gamma H) psi, walls treated as zero
    for (std::size_t i = 0; i < m; ++i) {
      const std::complex<double> left = (i == 0) ? 0.0 : a[i];
      const std::complex<double> right = (i + 1 == m) ? 0.0 : a[i + 2];
      const std::complex<double> h =
          kin * (2.0 * a[i + 1] - left - right) + v_mid.v[i + 1] * a[i + 1];
      rhs[i] = a[i + 1] - ig * h;
    }
    // forward sweep of A = (1 + i gamma H)
    {
      const std::complex<double> d0 = 1.0 + ig * (2.0 * kin + v_mid.v[1]);
      if (std::abs(d0) < 1e-300) throw SolverSingularError("step: zero pivot");
      cp[0] = off / d0;
      dp[0] = rhs[0] / d0;
    }
    for (std::size_t i = 1; i < m; ++i) {
      const std::complex<double> di = 1.0 + ig * (2.0 * kin + v_mid.v[i + 1]);
      const std::complex<double> denom = di - off * cp[i - 1];
      if (std::abs(denom) < 1e-300) throw SolverSingularError("step: zero pivot");
      cp[i] = off / denom;
      dp[i] = (rhs[i] - off * dp[i - 1]) / denom;
    }
    a[n - 1] = 0.0;
    a[0] = 0.0;
    a[m] = dp[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) {
      a[i + 1] = dp[i] - cp[i] * a[i + 2];
    }
    psi.t += dt;
  }
};

}  // namespace

double RampSchedule::g(double t) const {
  const double T = total_time;
  if (t <= 0.0 || t >= T) return 0.0;
  switch (shape) {
    case Shape::SinSquared: {
      const double s = std::sin(std::numbers::pi * t / T);
      return s * s;
    }
    case Shape::Linear:
      return t <= 0.5 * T ? 2.0 * t / T : 2.0 * (1.0 - t / T);
    case Shape::Smoothstep:
      return t <= 0.5 * T ? smoothstep01(2.0 * t / T) : smoothstep01(2.0 * (1.0 - t / T));
  }
  return 0.0;
}

PotentialSample PotentialSchedule::at(double t) const {
  PotentialSample v = base;
  const double s = strength(t);
  if (s != 0.0) {
    for (std::size_t i = 0; i < v.v.size(); ++i) v.v[i] += s * bump.v[i];
  }
  return v;
}

PotentialSchedule PotentialSchedule::static_potential(PotentialSample v0, double total_time) {
  PotentialSchedule sched;
  sched.bump = box_potential(v0.grid);
  sched.base = std::move(v0);
  sched.lambda = 0.0;
  sched.ramp.total_time = total_time;
  return sched;
}

double EvolutionTrace::max_norm_drift() const {
  double drift = 0.0;
  for (double n : norms) drift = std::max(drift, std::abs(n - 1.0));
  return drift;
}

double EvolutionTrace::min_fidelity() const {
  double f = 1.0;
  for (double v : fidelities) f = std::min(f, v);
  return f;
}

double EvolutionTrace::final_fidelity() const {
  return fidelities.empty() ? 1.0 : fidelities.back();
}

Wavefunction step(const Wavefunction& psi, const PotentialSample& v_mid, double dt,
                  const PhysicalConstants& consts) {
  if (dt == 0.0) throw ResolutionError("step: dt must be nonzero");
  if (!psi.grid.same_as(v_mid.grid)) throw GridMismatchError("step: potential grid mismatch");
  Wavefunction out = psi;
  CnWorkspace ws;
  ws.advance(out, v_mid, dt, consts);
  return out;
}

EvolutionTrace propagate(const Wavefunction& psi0, const PotentialSchedule& sched,
                         const PropagateOptions& opt, const PhysicalConstants& consts) {
  const Grid& g = psi0.grid;
  const double T = sched.ramp.total_time;
  if (!(opt.dt > 0.0)) throw ResolutionError("propagate: dt must be positive");
  const double dt_cap = opt.max_dt_ratio * g.dx * g.dx * consts.mass / consts.hbar;
  if (opt.dt > dt_cap) {
    throw ResolutionError("propagate: dt " + std::to_string(opt.dt) +
                          " exceeds accuracy guard " + std::to_string(dt_cap));
  }
  const long long n_steps = std::llround(T / opt.dt);
  if (n_steps < 1 || std::abs(static_cast<double>(n_steps) * opt.dt - T) >
                         1e-9 * std::max(1.0, T)) {
    throw ResolutionError("propagate: dt does not divide total_time");
  }
  if (std::abs(probability_norm(psi0) - 1.0) > 1e-6) {
    throw ZeroNormError("propagate: psi0 must be normalized");
  }
  if (opt.store_stride < 1) throw ResolutionError("propagate: store_stride must be >= 1");

  EvolutionTrace trace;
  trace.grid = g;
  trace.dt = opt.dt;

  Wavefunction psi = psi0;
  psi.t = 0.0;
  CnWorkspace ws;

  auto store_frame = [&](long long k) {
    const double t = static_cast<double>(k) * opt.dt;
    psi.t = t;
    trace.times.push_back(t);
    trace.frames.push_back(density_current(psi, consts));
    trace.norms.push_back(probability_norm(psi));
    const bool final_frame = (k == n_steps);
    if (opt.fidelity_stride > 0) {
      const std::size_t idx = trace.times.size() - 1;
      if (idx % static_cast<std::size_t>(opt.fidelity_stride) == 0 || final_frame) {
        const auto [e0, phi0] = ground_state(sched.at(t), consts);
        (void)e0;
        const double fid = std::norm(overlap(phi0, psi));
        trace.fid_times.push_back(t);
        trace.fidelities.push_back(fid);
      }
    }
  };

  store_frame(0);
  for (long long k = 0; k < n_steps; ++k) {
    const double t_mid = (static_cast<double>(k) + 0.5) * opt.dt;
    ws.advance(psi, sched.at(t_mid), opt.dt, consts);
    const long long done = k + 1;
    if (done % opt.store_stride == 0 || done == n_steps) store_frame(done);
  }
  psi.t = static_cast<double>(n_steps) * opt.dt;
  trace.psi_final = std::move(psi);
  return trace;
}

double continuity_residual(const EvolutionTrace& trace, std::size_t k) {
  if (k + 1 >= trace.frames.size()) {
    throw MissingFrameError("continuity_residual: frames " + std::to_string(k) + "," +
                            std::to_string(k + 1) + " not stored");
  }
  const DensityFields& f0 = trace.frames[k];
  const DensityFields& f1 = trace.frames[k + 1];
  const Grid& g = trace.grid;
  const double dt = trace.times[k + 1] - trace.times[k];
  const double inv2dx = 1.0 / (2.0 * g.dx);
  double worst = 0.0;
  for (int i = 1; i + 1 < g.n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double drho_dt = (f1.rho[u] - f0.rho[u]) / dt;
    const double jm_right = 0.5 * (f0.j[u + 1] + f1.j[u + 1]);
    const double jm_left = 0.5 * (f0.j[u - 1] + f1.j[u - 1]);
    const double djdx = (jm_right - jm_left) * inv2dx;
    worst = std::max(worst, std::abs(drho_dt + djdx));
  }
  return worst;
}

}  // namespace bohmlab
