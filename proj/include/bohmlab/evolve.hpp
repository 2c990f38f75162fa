#pragma once

#include <vector>

#include "bohmlab/constants.hpp"
#include "bohmlab/fields.hpp"
#include "bohmlab/potential.hpp"
#include "bohmlab/wavefunction.hpp"

namespace bohmlab {

// Dimensionless switching profile g(t): zero at both ends, peak 1 at T/2.
struct RampSchedule {
  enum class Shape { SinSquared, Linear, Smoothstep };
  Shape shape = Shape::SinSquared;
  double total_time = 200.0;

  double g(double t) const;
};

// V(x,t) = V0(x) + lambda * g(t) * bump(x). The bump is unit-peak and
// supported only inside the declared interval [interval_lo, interval_hi].
struct PotentialSchedule {
  PotentialSample base;
  PotentialSample bump;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  double lambda = 0.0;
  RampSchedule ramp;

  double strength(double t) const { return lambda * ramp.g(t); }
  PotentialSample at(double t) const;

  // Static potential (lambda = 0); bump degenerates to zero.
  static PotentialSchedule static_potential(PotentialSample v0, double total_time);
};

// Stored frames of one propagation: density fields per frame, norms, and
// instantaneous-ground-state fidelities on their own sampling times.
struct EvolutionTrace {
  Grid grid;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<DensityFields> frames;
  std::vector<double> norms;
  std::vector<double> fid_times;
  std::vector<double> fidelities;  // |<phi0(t)|psi(t)>|^2
  Wavefunction psi_final;

  std::size_t frame_count() const { return times.size(); }
  double max_norm_drift() const;
  double min_fidelity() const;
  double final_fidelity() const;
};

struct PropagateOptions {
  double dt = 2e-3;
  int store_stride = 1;     // store fields every store_stride-th step
  int fidelity_stride = 0;  // 0 = off; else every Nth stored frame, plus the final one
  double max_dt_ratio = 50.0;  // accuracy guard: dt <= ratio * dx^2 * m / hbar
};

// One Crank-Nicolson step with the midpoint-sampled potential:
// (1 + i dt/(2 hbar) H) psi' = (1 - i dt/(2 hbar) H) psi, tridiagonal solve.
// The Cayley form is exactly unitary; dt < 0 runs the inverse step.
Wavefunction step(const Wavefunction& psi, const PotentialSample& v_mid, double dt,
                  const PhysicalConstants& consts);

EvolutionTrace propagate(const Wavefunction& psi0, const PotentialSchedule& sched,
                         const PropagateOptions& opt, const PhysicalConstants& consts);

// Max over interior nodes of |(rho_{k+1}-rho_k)/dt + d/dx j_mid| between
// stored frames k and k+1. Total function of any stored pair.
double continuity_residual(const EvolutionTrace& trace, std::size_t k);

}  // namespace bohmlab
