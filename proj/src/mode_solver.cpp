#include "evapfront/mode_solver.hpp"

#include <complex>

#include "evapfront/errors.hpp"

namespace evapfront {

ModeBandedSolver::ModeBandedSolver(const TransverseOps& ops, double h,
                                   std::span<const double> c,
                                   std::span<const double> b, double shift)
    : ops_(&ops), interior_(c.size()), modes_(ops.modes()) {
  if (b.size() != c.size() || interior_ < 1) {
    throw ValidationError("mode solver: coefficient profiles mismatch");
  }
  const double inv_h2 = 1.0 / (h * h);
  const double inv_2h = 1.0 / (2.0 * h);
  sub_.resize(interior_);
  std::vector<double> sup(interior_);
  std::vector<double> diag0(interior_);
  for (std::size_t j = 0; j < interior_; ++j) {
    sub_[j] = c[j] * inv_h2 - b[j] * inv_2h;
    sup[j] = c[j] * inv_h2 + b[j] * inv_2h;
    diag0[j] = -2.0 * c[j] * inv_h2 - shift;
  }

  upper_.resize(interior_ * modes_);
  denom_.resize(interior_ * modes_);
  for (std::size_t m = 0; m < modes_; ++m) {
    const double kappa = ops.laplacian_eigenvalue(m);
    double prev_upper = 0.0;
    for (std::size_t j = 0; j < interior_; ++j) {
      const double diag = diag0[j] - kappa;
      const double d = j == 0 ? diag : diag - sub_[j] * prev_upper;
      if (d == 0.0) throw NumericalError("mode solver: singular pivot");
      denom_[j * modes_ + m] = d;
      prev_upper = sup[j] / d;
      upper_[j * modes_ + m] = prev_upper;
    }
  }
}

void ModeBandedSolver::solve(const LayerField& rhs, LayerField& out) const {
  const std::size_t levels = interior_ + 2;
  const std::size_t np = ops_->points();
  if (rhs.levels() != levels || rhs.points() != np) {
    throw ValidationError("mode solver: right-hand side has wrong shape");
  }
  if (out.levels() != levels || out.points() != np) out = LayerField(levels, np);

  std::vector<std::complex<double>> spec(interior_ * modes_);
  for (std::size_t j = 0; j < interior_; ++j) {
    ops_->forward(rhs.level(j + 1),
                  std::span(spec.data() + j * modes_, modes_));
  }
  for (std::size_t m = 0; m < modes_; ++m) {
    std::complex<double> prev = 0.0;
    for (std::size_t j = 0; j < interior_; ++j) {
      auto& v = spec[j * modes_ + m];
      v = (j == 0 ? v : v - sub_[j] * prev) / denom_[j * modes_ + m];
      prev = v;
    }
    for (std::size_t j = interior_ - 1; j-- > 0;) {
      spec[j * modes_ + m] -= upper_[j * modes_ + m] * spec[(j + 1) * modes_ + m];
    }
  }
  for (std::size_t j = 0; j < interior_; ++j) {
    ops_->backward(std::span<const std::complex<double>>(
                       spec.data() + j * modes_, modes_),
                   out.level(j + 1));
  }
  for (std::size_t p = 0; p < np; ++p) {
    out(0, p) = 0.0;
    out(levels - 1, p) = 0.0;
  }
}

}  // namespace evapfront
