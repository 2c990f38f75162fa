#include "bohmlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bohmlab/errors.hpp"

namespace bohmlab {

Grid build_grid(double x_min, double x_max, int n) {
  if (!(x_max > x_min)) {
    throw InvalidBoundsError("build_grid: x_max must exceed x_min (got [" +
                             std::to_string(x_min) + ", " + std::to_string(x_max) + "])");
  }
  if (n < 16) {
    throw InvalidBoundsError("build_grid: need at least 16 points, got " + std::to_string(n));
  }
  if (!std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw InvalidBoundsError("build_grid: non-finite bounds");
  }
  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n = n;
  g.dx = (x_max - x_min) / static_cast<double>(n - 1);
  return g;
}

double sample_linear(const Grid& grid, const std::vector<double>& values, double x) {
  const double lo = grid.x_min;
  const double hi = grid.x_back();
  x = std::clamp(x, lo, hi);
  double s = (x - lo) / grid.dx;
  int i = static_cast<int>(s);
  if (i >= grid.n - 1) i = grid.n - 2;
  const double w = s - static_cast<double>(i);
  const auto u = static_cast<std::size_t>(i);
  return values[u] + w * (values[u + 1] - values[u]);
}

}  // namespace bohmlab
