#include "evapfront/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evapfront/errors.hpp"

namespace evapfront {

namespace {
constexpr int kMinCount = 4;  // smallest count that leaves room for 3-point stencils
}

std::size_t Grid::points() const {
  std::size_t n = static_cast<std::size_t>(n_transverse);
  return transverse_dims == 2 ? n * n : n;
}

double Grid::coordinate(std::size_t point, int axis) const {
  const std::size_t n = static_cast<std::size_t>(n_transverse);
  const std::size_t index = axis == 0 ? point % n : point / n;
  return static_cast<double>(index) / n_transverse;
}

Grid build_grid(int n_transverse, int n_lower, int n_upper, double H,
                int transverse_dims) {
  if (!(H > 0.0 && H < 1.0)) {
    throw ValidationError("interface level H must lie in (0,1), got " +
                          std::to_string(H));
  }
  if (n_transverse < kMinCount || n_lower < kMinCount || n_upper < kMinCount) {
    throw ValidationError(
        "grid counts must be >= 4 for second-order stencils (got " +
        std::to_string(n_transverse) + ", " + std::to_string(n_lower) + ", " +
        std::to_string(n_upper) + ")");
  }
  if (transverse_dims != 1 && transverse_dims != 2) {
    throw ValidationError("transverse_dims must be 1 or 2");
  }

  Grid g;
  g.n_transverse = n_transverse;
  g.transverse_dims = transverse_dims;
  g.n_lower = n_lower;
  g.n_upper = n_upper;
  g.H = H;

  g.z_lower.resize(n_lower + 1);
  for (int j = 0; j < n_lower; ++j) g.z_lower[j] = H * j / n_lower;
  g.z_lower[n_lower] = H;

  g.z_upper.resize(n_upper + 1);
  g.z_upper[0] = H;
  for (int j = 1; j < n_upper; ++j) g.z_upper[j] = H + (1.0 - H) * j / n_upper;
  g.z_upper[n_upper] = 1.0;
  return g;
}

double LayerField::min() const {
  return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

double LayerField::max() const {
  return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

}  // namespace evapfront
