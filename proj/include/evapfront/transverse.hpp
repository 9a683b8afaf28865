#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "evapfront/grid.hpp"

namespace evapfront {

/// Transverse differentiation on the periodic torus through real FFTs.
///
/// Both schemes are Fourier multipliers: `spectral` uses the exact symbols
/// (ik, -k^2, first-derivative Nyquist mode zeroed), `centered` uses the
/// symbols of the second-order centered stencils. Because both are diagonal
/// in Fourier space, the per-mode banded solvers below treat either scheme
/// identically.
///
/// Plans are built once; every transform runs on call-local buffers, so a
/// const instance may be shared between threads.
class TransverseOps {
 public:
  TransverseOps(const Grid& grid, TransverseScheme scheme);
  ~TransverseOps();
  TransverseOps(TransverseOps&&) noexcept;
  TransverseOps& operator=(TransverseOps&&) noexcept;
  TransverseOps(const TransverseOps&) = delete;
  TransverseOps& operator=(const TransverseOps&) = delete;

  std::size_t points() const { return points_; }
  std::size_t modes() const { return modes_; }
  int dims() const { return dims_; }
  TransverseScheme scheme() const { return scheme_; }

  /// Unnormalized forward transform onto the half spectrum.
  void forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;
  /// Inverse of `forward` (includes the 1/N factor).
  void backward(std::span<const std::complex<double>> in,
                std::span<double> out) const;

  void derivative(std::span<const double> in, int axis,
                  std::span<double> out) const;
  void laplacian(std::span<const double> in, std::span<double> out) const;

  void derivative(const LayerField& in, int axis, LayerField& out) const;
  void laplacian(const LayerField& in, LayerField& out) const;

  /// Symbol of d/dx_axis at half-spectrum mode `mode`.
  std::complex<double> derivative_symbol(std::size_t mode, int axis) const;
  /// Nonnegative eigenvalue of minus the transverse Laplacian at `mode`.
  double laplacian_eigenvalue(std::size_t mode) const {
    return neg_laplacian_[mode];
  }
  /// Integer wavenumber of `mode` along `axis` (signed).
  int wavenumber(std::size_t mode, int axis) const;

 private:
  struct Plans;
  std::unique_ptr<Plans> plans_;
  TransverseScheme scheme_;
  int n_ = 0;
  int dims_ = 1;
  std::size_t points_ = 0;
  std::size_t modes_ = 0;
  std::vector<std::complex<double>> first_[2];
  std::vector<double> neg_laplacian_;
};

}  // namespace evapfront
