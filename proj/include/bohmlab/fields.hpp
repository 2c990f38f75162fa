#pragma once

#include <vector>

#include "bohmlab/constants.hpp"
#include "bohmlab/grid.hpp"
#include "bohmlab/wavefunction.hpp"

namespace bohmlab {

// rho = |psi|^2, probability current j, and the cumulative distribution of
// rho, all on the grid at one time stamp.
struct DensityFields {
  Grid grid;
  std::vector<double> rho;
  std::vector<double> j;
  std::vector<double> cdf;  // cumulative trapezoid of rho, clamped to [0,1]
  double t = 0.0;
  double rho_max = 0.0;
};

// j = (hbar/m) Im(conj(psi) dpsi/dx), central differences in the interior,
// one-sided 3-point stencils at the two walls.
DensityFields density_current(const Wavefunction& psi, const PhysicalConstants& consts);

// Inverse CDF by monotone piecewise-linear interpolation. Flat (zero-density)
// plateaus resolve to their left edge. Throws OutOfRangeError for p outside (0,1).
double quantile(const DensityFields& fields, double p);

// Linear interpolation of the CDF at x (x clamped to the grid).
double cdf_at(const DensityFields& fields, double x);

// P[a <= x <= b] = cdf(b) - cdf(a). Throws InvalidIntervalError unless a < b.
double interval_probability(const DensityFields& fields, double a, double b);

}  // namespace bohmlab
