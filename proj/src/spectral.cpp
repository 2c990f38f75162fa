#include "bohmlab/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "bohmlab/errors.hpp"

namespace bohmlab {

namespace {

void validate_potential(const PotentialSample& v) {
  if (v.v.size() != static_cast<std::size_t>(v.grid.n)) {
    throw InvalidBoundsError("potential: sample length does not match grid");
  }
  for (double u : v.v) {
    if (!std::isfinite(u)) throw InvalidBoundsError("potential: non-finite value");
  }
}

// One inverse-iteration pass: solve (T - E) y = z and renormalize. Partial
// pivoting handles the near-singular shift; on a hard failure the input
// vector is kept as-is.
void refine_eigenvector(const std::vector<double>& diag, double off, double energy,
                        std::vector<double>& z) {
  const lapack_int m = static_cast<lapack_int>(diag.size());
  std::vector<double> dl(static_cast<std::size_t>(m - 1), off);
  std::vector<double> du(static_cast<std::size_t>(m - 1), off);
  std::vector<double> d(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) d[i] = diag[i] - energy;
  std::vector<double> y = z;
  lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, m, 1, dl.data(), d.data(), du.data(),
                                  y.data(), m);
  if (info != 0) {
    // exact zero pivot: nudge the shift and retry once
    const double nudge = 1e-12 * (1.0 + std::abs(energy));
    std::fill(dl.begin(), dl.end(), off);
    std::fill(du.begin(), du.end(), off);
    for (std::size_t i = 0; i < diag.size(); ++i) d[i] = diag[i] - (energy + nudge);
    y = z;
    info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, m, 1, dl.data(), d.data(), du.data(), y.data(), m);
    if (info != 0) return;
  }
  double norm2 = 0.0;
  for (double u : y) norm2 += u * u;
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) return;
  double dot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) dot += y[i] * z[i];
  const double scale = (dot < 0.0 ? -1.0 : 1.0) / std::sqrt(norm2);
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = y[i] * scale;
}

Wavefunction embed_eigenvector(const Grid& grid, const std::vector<double>& z) {
  Wavefunction psi;
  psi.grid = grid;
  psi.t = 0.0;
  psi.amp.assign(static_cast<std::size_t>(grid.n), 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) psi.amp[i + 1] = z[i];
  psi = normalize(std::move(psi));
  // phase convention: largest-magnitude amplitude real positive
  std::size_t imax = 0;
  double amax = 0.0;
  for (std::size_t i = 0; i < psi.amp.size(); ++i) {
    const double a = std::abs(psi.amp[i]);
    if (a > amax) {
      amax = a;
      imax = i;
    }
  }
  if (amax > 0.0) {
    const std::complex<double> phase = psi.amp[imax] / amax;
    for (auto& a : psi.amp) a /= phase;
  }
  return psi;
}

}  // namespace

TridiagonalHamiltonian discretize_hamiltonian(const PotentialSample& v,
                                              const PhysicalConstants& consts) {
  validate_potential(v);
  const Grid& g = v.grid;
  const double kin = consts.hbar * consts.hbar / (2.0 * consts.mass * g.dx * g.dx);
  TridiagonalHamiltonian h;
  h.grid = g;
  h.off = -kin;
  h.diag.resize(static_cast<std::size_t>(g.n - 2));
  for (int i = 1; i + 1 < g.n; ++i) {
    h.diag[static_cast<std::size_t>(i - 1)] = 2.0 * kin + v.v[static_cast<std::size_t>(i)];
  }
  return h;
}

SpectralResult eigenstates(const PotentialSample& v, int k, const PhysicalConstants& consts) {
  validate_potential(v);
  const Grid& g = v.grid;
  if (k < 1 || k > g.n / 4) {
    throw OutOfRangeError("eigenstates: k must lie in [1, n/4], got k=" + std::to_string(k));
  }
  const TridiagonalHamiltonian h = discretize_hamiltonian(v, consts);
  const lapack_int m = static_cast<lapack_int>(h.diag.size());

  std::vector<double> d = h.diag;
  std::vector<double> e(static_cast<std::size_t>(m), h.off);
  std::vector<double> w(static_cast<std::size_t>(m));
  std::vector<double> z(static_cast<std::size_t>(m) * static_cast<std::size_t>(k));
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', m, d.data(), e.data(), 0.0, 0.0, 1,
                     static_cast<lapack_int>(k), 0.0, &found, w.data(), z.data(), m,
                     isuppz.data());
  if (info != 0 || found < static_cast<lapack_int>(k)) {
    throw SolverSingularError("eigenstates: tridiagonal eigensolver failed (info=" +
                              std::to_string(info) + ")");
  }

  SpectralResult result;
  result.energies.assign(w.begin(), w.begin() + k);
  for (int q = 0; q + 1 < k; ++q) {
    const double gap = result.energies[static_cast<std::size_t>(q + 1)] -
                       result.energies[static_cast<std::size_t>(q)];
    const double scale = std::max({1.0, std::abs(result.energies[static_cast<std::size_t>(q)]),
                                   std::abs(result.energies[static_cast<std::size_t>(q + 1)])});
    if (gap < 1e-10 * scale) {
      throw DegeneracyError("eigenstates: levels " + std::to_string(q) + " and " +
                            std::to_string(q + 1) + " are degenerate (gap " +
                            std::to_string(gap) + ")");
    }
  }

  result.states.reserve(static_cast<std::size_t>(k));
  std::vector<double> col(static_cast<std::size_t>(m));
  for (int q = 0; q < k; ++q) {
    const double* src = z.data() + static_cast<std::size_t>(q) * static_cast<std::size_t>(m);
    col.assign(src, src + m);
    refine_eigenvector(h.diag, h.off, result.energies[static_cast<std::size_t>(q)], col);
    result.states.push_back(embed_eigenvector(g, col));
  }
  return result;
}

std::pair<double, Wavefunction> ground_state(const PotentialSample& v,
                                             const PhysicalConstants& consts) {
  SpectralResult r = eigenstates(v, 1, consts);
  return {r.energies[0], std::move(r.states[0])};
}

Wavefunction apply_hamiltonian(const Wavefunction& psi, const PotentialSample& v,
                               const PhysicalConstants& consts) {
  if (!psi.grid.same_as(v.grid)) {
    throw GridMismatchError("apply_hamiltonian: potential grid mismatch");
  }
  const Grid& g = psi.grid;
  const std::size_t n = psi.amp.size();
  const double kin = consts.hbar * consts.hbar / (2.0 * consts.mass * g.dx * g.dx);
  Wavefunction out;
  out.grid = g;
  out.t = psi.t;
  out.amp.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.amp[i] = kin * (2.0 * psi.amp[i] - psi.amp[i - 1] - psi.amp[i + 1]) +
                 v.v[i] * psi.amp[i];
  }
  return out;
}

double energy_expectation(const Wavefunction& psi, const PotentialSample& v,
                          const PhysicalConstants& consts) {
  return std::real(overlap(psi, apply_hamiltonian(psi, v, consts)));
}

}  // namespace bohmlab
