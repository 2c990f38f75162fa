#include "bohmlab/potential.hpp"

namespace bohmlab {

PotentialSample harmonic_potential(const Grid& grid, double k, double center) {
  PotentialSample p;
  p.grid = grid;
  p.v.resize(static_cast<std::size_t>(grid.n));
  for (int i = 0; i < grid.n; ++i) {
    const double u = grid.x(i) - center;
    p.v[static_cast<std::size_t>(i)] = 0.5 * k * u * u;
  }
  return p;
}

PotentialSample box_potential(const Grid& grid) {
  PotentialSample p;
  p.grid = grid;
  p.v.assign(static_cast<std::size_t>(grid.n), 0.0);
  return p;
}

PotentialSample sample_potential(const Grid& grid, const std::vector<double>& v) {
  PotentialSample p;
  p.grid = grid;
  p.v = v;
  return p;
}

}  // namespace bohmlab
