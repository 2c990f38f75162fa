#pragma once

#include <utility>
#include <vector>

#include "bohmlab/constants.hpp"
#include "bohmlab/potential.hpp"
#include "bohmlab/wavefunction.hpp"

namespace bohmlab {

// H = -(hbar^2/2m) d2/dx2 + V on the interior points, Dirichlet walls.
// 3-point Laplacian: diag = hbar^2/(m dx^2) + v_i, off = -hbar^2/(2m dx^2).
struct TridiagonalHamiltonian {
  Grid grid;
  std::vector<double> diag;  // size n-2 (interior nodes)
  double off = 0.0;
};

TridiagonalHamiltonian discretize_hamiltonian(const PotentialSample& v,
                                              const PhysicalConstants& consts);

struct SpectralResult {
  std::vector<double> energies;       // strictly ascending
  std::vector<Wavefunction> states;   // trapezoid-normalized, phase-fixed
};

// k lowest bound states of the instantaneous Hamiltonian. Eigenvalues by
// symmetric tridiagonal eigendecomposition, eigenvectors refined by one
// inverse-iteration pass. Throws DegeneracyError when two returned levels
// coincide within 1e-10*max(1,|E|) and OutOfRangeError for k outside [1, n/4].
SpectralResult eigenstates(const PotentialSample& v, int k, const PhysicalConstants& consts);

std::pair<double, Wavefunction> ground_state(const PotentialSample& v,
                                             const PhysicalConstants& consts);

// Full-grid H*psi with Dirichlet walls (result walls are zero).
Wavefunction apply_hamiltonian(const Wavefunction& psi, const PotentialSample& v,
                               const PhysicalConstants& consts);

// <psi|H|psi> via the trapezoid inner product.
double energy_expectation(const Wavefunction& psi, const PotentialSample& v,
                          const PhysicalConstants& consts);

}  // namespace bohmlab
