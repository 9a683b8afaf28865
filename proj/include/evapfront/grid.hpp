#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace evapfront {

enum class TransverseScheme { spectral, centered };

/// Periodic layer grid over T^{d} x (0,1), d = transverse_dims in {1, 2}.
///
/// The lower phase (0,H) and the upper phase (H,1) carry their own uniform
/// z-levels; z = H is a node of both. Transverse nodes sit at i/n_transverse,
/// i = 0..n_transverse-1, along every transverse axis.
struct Grid {
  int n_transverse = 0;
  int transverse_dims = 1;
  int n_lower = 0;
  int n_upper = 0;
  double H = 0.5;
  std::vector<double> z_lower;  // n_lower + 1 levels, z_lower.back() == H
  std::vector<double> z_upper;  // n_upper + 1 levels, z_upper.front() == H

  std::size_t points() const;
  double dx() const { return 1.0 / n_transverse; }
  double h_lower() const { return H / n_lower; }
  double h_upper() const { return (1.0 - H) / n_upper; }

  /// Coordinate of transverse node `point` along `axis`.
  double coordinate(std::size_t point, int axis) const;

  bool operator==(const Grid&) const = default;
};

/// Throws ValidationError for H outside (0,1), counts below 4 or
/// transverse_dims outside {1, 2}.
Grid build_grid(int n_transverse, int n_lower, int n_upper, double H,
                int transverse_dims = 1);

/// Scalar field on a stack of z-levels, each level a full transverse slice.
/// Storage is level-major so every level is contiguous.
class LayerField {
 public:
  LayerField() = default;
  LayerField(std::size_t levels, std::size_t points, double value = 0.0)
      : levels_(levels), points_(points), data_(levels * points, value) {}

  std::size_t levels() const { return levels_; }
  std::size_t points() const { return points_; }

  double& operator()(std::size_t level, std::size_t point) {
    return data_[level * points_ + point];
  }
  double operator()(std::size_t level, std::size_t point) const {
    return data_[level * points_ + point];
  }

  std::span<double> level(std::size_t j) {
    return {data_.data() + j * points_, points_};
  }
  std::span<const double> level(std::size_t j) const {
    return {data_.data() + j * points_, points_};
  }

  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double min() const;
  double max() const;

  bool operator==(const LayerField&) const = default;

 private:
  std::size_t levels_ = 0;
  std::size_t points_ = 0;
  std::vector<double> data_;
};

}  // namespace evapfront
