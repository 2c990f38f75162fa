#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "bohmlab/grid.hpp"

namespace bohmlab {

// Complex amplitudes on a grid at a time stamp. Bound-state box convention:
// amplitudes at the two walls are (numerically) zero.
struct Wavefunction {
  Grid grid;
  std::vector<std::complex<double>> amp;
  double t = 0.0;
};

// Trapezoid-rule integral of |psi|^2 dx.
double probability_norm(const Wavefunction& psi);

// Rescales so probability_norm == 1 (within 1e-10). Phase untouched.
// Throws ZeroNormError for vanishing input.
Wavefunction normalize(Wavefunction psi);

// Trapezoid approximation of the inner product integral conj(psi)*phi dx.
// Throws GridMismatchError when the grids differ.
std::complex<double> overlap(const Wavefunction& psi, const Wavefunction& phi);

// |psi| at the two walls; the bound-state box invariant wants both < 1e-6.
double boundary_amplitude(const Wavefunction& psi);

// Samples a complex-valued function on the grid; does not normalize.
Wavefunction sample_wavefunction(const Grid& grid,
                                 const std::function<std::complex<double>(double)>& f,
                                 double t = 0.0);

// Normalized Gaussian packet exp(-(x-center)^2/(2 sigma^2)) * exp(i k x).
Wavefunction gaussian_packet(const Grid& grid, double sigma, double center = 0.0,
                             double wavenumber = 0.0);

}  // namespace bohmlab
