#pragma once

#include <span>
#include <vector>

#include "evapfront/grid.hpp"
#include "evapfront/transverse.hpp"

namespace evapfront {

/// Direct solver for c(z) u_zz + b(z) u_z + Δ'u - shift u = f on one phase
/// with homogeneous Dirichlet data at both end levels.
///
/// Coefficients depend on z only, so the problem decouples into one
/// tridiagonal system per transverse Fourier mode. Factorizations are
/// computed in the constructor; `solve` only sweeps.
class ModeBandedSolver {
 public:
  /// `c` and `b` hold one value per interior level (levels - 2 entries).
  ModeBandedSolver(const TransverseOps& ops, double h,
                   std::span<const double> c, std::span<const double> b,
                   double shift);

  /// Interior levels of `out` receive the solution, end levels are zero.
  void solve(const LayerField& rhs, LayerField& out) const;

  std::size_t interior_levels() const { return interior_; }

 private:
  const TransverseOps* ops_;
  std::size_t interior_ = 0;
  std::size_t modes_ = 0;
  std::vector<double> sub_;    // per level
  std::vector<double> upper_;  // modified super-diagonal, per (level, mode)
  std::vector<double> denom_;  // per (level, mode)
};

}  // namespace evapfront
