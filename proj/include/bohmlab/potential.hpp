#pragma once

#include <vector>

#include "bohmlab/grid.hpp"

namespace bohmlab {

// Potential energy sampled on the grid. Must be finite and bounded below.
struct PotentialSample {
  Grid grid;
  std::vector<double> v;
};

// V = 0.5*k*(x-center)^2
PotentialSample harmonic_potential(const Grid& grid, double k = 1.0, double center = 0.0);

// V = 0 everywhere; the Dirichlet walls make it a hard box.
PotentialSample box_potential(const Grid& grid);

PotentialSample sample_potential(const Grid& grid, const std::vector<double>& v);

}  // namespace bohmlab
