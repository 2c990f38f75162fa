#pragma once

#include <vector>

namespace bohmlab {

// Uniform 1D spatial lattice. Node i sits at exactly x_min + i*dx.
struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n = 16;
  double dx = 1.0 / 15.0;

  double x(int i) const { return x_min + i * dx; }
  // Last node; equals x_max up to one rounding of x_min + (n-1)*dx.
  double x_back() const { return x(n - 1); }

  bool same_as(const Grid& other) const {
    return x_min == other.x_min && x_max == other.x_max && n == other.n;
  }

  std::vector<double> nodes() const {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = x(i);
    return xs;
  }
};

// Throws InvalidBoundsError unless x_max > x_min and n >= 16.
Grid build_grid(double x_min, double x_max, int n);

// Linear interpolation of a nodal array at position x (clamped to the grid).
double sample_linear(const Grid& grid, const std::vector<double>& values, double x);

}  // namespace bohmlab
