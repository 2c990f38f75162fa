#include "bohmlab/wavefunction.hpp"

#include <cmath>

#include "bohmlab/errors.hpp"

namespace bohmlab {

double probability_norm(const Wavefunction& psi) {
  const std::size_t n = psi.amp.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    acc += w * std::norm(psi.amp[i]);
  }
  return acc * psi.grid.dx;
}

Wavefunction normalize(Wavefunction psi) {
  const double p = probability_norm(psi);
  if (!(p > 1e-300) || !std::isfinite(p)) {
    throw ZeroNormError("normalize: wavefunction has vanishing norm");
  }
  const double scale = 1.0 / std::sqrt(p);
  for (auto& a : psi.amp) a *= scale;
  return psi;
}

std::complex<double> overlap(const Wavefunction& psi, const Wavefunction& phi) {
  if (!psi.grid.same_as(phi.grid)) {
    throw GridMismatchError("overlap: wavefunctions live on different grids");
  }
  const std::size_t n = psi.amp.size();
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    acc += w * std::conj(psi.amp[i]) * phi.amp[i];
  }
  return acc * psi.grid.dx;
}

double boundary_amplitude(const Wavefunction& psi) {
  return std::max(std::abs(psi.amp.front()), std::abs(psi.amp.back()));
}

Wavefunction sample_wavefunction(const Grid& grid,
                                 const std::function<std::complex<double>(double)>& f,
                                 double t) {
  Wavefunction psi;
  psi.grid = grid;
  psi.t = t;
  psi.amp.resize(static_cast<std::size_t>(grid.n));
  for (int i = 0; i < grid.n; ++i) {
    psi.amp[static_cast<std::size_t>(i)] = f(grid.x(i));
  }
  return psi;
}

Wavefunction gaussian_packet(const Grid& grid, double sigma, double center,
                             double wavenumber) {
  auto psi = sample_wavefunction(grid, [=](double x) {
    const double u = (x - center) / sigma;
    const std::complex<double> phase(0.0, wavenumber * x);
    return std::exp(-0.5 * u * u + phase);
  });
  return normalize(std::move(psi));
}

}  // namespace bohmlab
