#include "bohmlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bohmlab/errors.hpp"

namespace bohmlab {

DensityFields density_current(const Wavefunction& psi, const PhysicalConstants& consts) {
  const Grid& g = psi.grid;
  const std::size_t n = psi.amp.size();
  DensityFields f;
  f.grid = g;
  f.t = psi.t;
  f.rho.resize(n);
  f.j.resize(n);
  f.cdf.resize(n);

  for (std::size_t i = 0; i < n; ++i) f.rho[i] = std::norm(psi.amp[i]);
  f.rho_max = *std::max_element(f.rho.begin(), f.rho.end());

  // j = (hbar/m) Im(conj(psi) psi'); the complex form (hbar/2im){...} reduces
  // to this identically, so no imaginary residue is ever materialized.
  const double c = consts.hbar / consts.mass;
  const double inv2dx = 1.0 / (2.0 * g.dx);
  const auto& a = psi.amp;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const std::complex<double> d = (a[i + 1] - a[i - 1]) * inv2dx;
    f.j[i] = c * std::imag(std::conj(a[i]) * d);
  }
  // one-sided 3-point stencils at the walls, also O(dx^2)
  const std::complex<double> d0 = (-3.0 * a[0] + 4.0 * a[1] - a[2]) * inv2dx;
  const std::complex<double> d1 = (3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) * inv2dx;
  f.j[0] = c * std::imag(std::conj(a[0]) * d0);
  f.j[n - 1] = c * std::imag(std::conj(a[n - 1]) * d1);

  f.cdf[0] = 0.0;
  double acc = 0.0;
  const double half_dx = 0.5 * g.dx;
  for (std::size_t i = 1; i < n; ++i) {
    acc += (f.rho[i - 1] + f.rho[i]) * half_dx;
    f.cdf[i] = std::clamp(acc, 0.0, 1.0);
  }
  return f;
}

double quantile(const DensityFields& fields, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw OutOfRangeError("quantile: p must lie in (0,1), got " + std::to_string(p));
  }
  const auto& cdf = fields.cdf;
  const Grid& g = fields.grid;
  // First node with cdf >= p; interpolating back from it lands on the left
  // edge of any plateau at value p.
  auto it = std::lower_bound(cdf.begin(), cdf.end(), p);
  if (it == cdf.end()) return g.x_back();
  const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
  if (i == 0) return g.x_min;
  const double lo = cdf[i - 1];
  const double hi = cdf[i];
  const double denom = hi - lo;
  if (denom <= 0.0) return g.x(static_cast<int>(i));
  const double w = (p - lo) / denom;
  return g.x(static_cast<int>(i - 1)) + w * g.dx;
}

double cdf_at(const DensityFields& fields, double x) {
  return sample_linear(fields.grid, fields.cdf, x);
}

double interval_probability(const DensityFields& fields, double a, double b) {
  if (!(a < b)) {
    throw InvalidIntervalError("interval_probability: need a < b");
  }
  return cdf_at(fields, b) - cdf_at(fields, a);
}

}  // namespace bohmlab
