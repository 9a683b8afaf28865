#include "evapfront/transverse.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "evapfront/errors.hpp"

namespace evapfront {

namespace {
// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct TransverseOps::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

TransverseOps::TransverseOps(const Grid& grid, TransverseScheme scheme)
    : plans_(std::make_unique<Plans>()),
      scheme_(scheme),
      n_(grid.n_transverse),
      dims_(grid.transverse_dims),
      points_(grid.points()) {
  const int half = n_ / 2 + 1;
  modes_ = dims_ == 1 ? static_cast<std::size_t>(half)
                      : static_cast<std::size_t>(n_) * half;

  {
    std::vector<double> real(points_);
    std::vector<std::complex<double>> spec(modes_);
    auto* r = real.data();
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    if (dims_ == 1) {
      plans_->r2c = fftw_plan_dft_r2c_1d(n_, r, c, flags);
      plans_->c2r = fftw_plan_dft_c2r_1d(n_, c, r, flags);
    } else {
      plans_->r2c = fftw_plan_dft_r2c_2d(n_, n_, r, c, flags);
      plans_->c2r = fftw_plan_dft_c2r_2d(n_, n_, c, r, flags);
    }
  }
  if (!plans_->r2c || !plans_->c2r) {
    throw NumericalError("FFTW plan creation failed");
  }

  const double two_pi = 2.0 * std::numbers::pi;
  const double n = static_cast<double>(n_);
  neg_laplacian_.assign(modes_, 0.0);
  for (int axis = 0; axis < dims_; ++axis) first_[axis].assign(modes_, 0.0);

  for (std::size_t m = 0; m < modes_; ++m) {
    for (int axis = 0; axis < dims_; ++axis) {
      const int k = wavenumber(m, axis);
      const bool nyquist = (n_ % 2 == 0) && (std::abs(k) == n_ / 2);
      if (scheme_ == TransverseScheme::spectral) {
        const double w = two_pi * k;
        first_[axis][m] = nyquist ? 0.0 : std::complex<double>(0.0, w);
        neg_laplacian_[m] += w * w;
      } else {
        const double theta = two_pi * k / n;
        first_[axis][m] = std::complex<double>(0.0, std::sin(theta) * n);
        neg_laplacian_[m] += (2.0 - 2.0 * std::cos(theta)) * n * n;
      }
    }
  }
}

TransverseOps::~TransverseOps() = default;
TransverseOps::TransverseOps(TransverseOps&&) noexcept = default;
TransverseOps& TransverseOps::operator=(TransverseOps&&) noexcept = default;

int TransverseOps::wavenumber(std::size_t mode, int axis) const {
  const std::size_t half = static_cast<std::size_t>(n_ / 2 + 1);
  if (axis == 0) return static_cast<int>(mode % half);
  const int index = static_cast<int>(mode / half);
  return index <= n_ / 2 ? index : index - n_;
}

std::complex<double> TransverseOps::derivative_symbol(std::size_t mode,
                                                      int axis) const {
  return first_[axis][mode];
}

void TransverseOps::forward(std::span<const double> in,
                            std::span<std::complex<double>> out) const {
  // r2c leaves its input intact, the const_cast only satisfies the C API.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void TransverseOps::backward(std::span<const std::complex<double>> in,
                             std::span<double> out) const {
  std::vector<std::complex<double>> work(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(work.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(points_);
  for (double& v : out) v *= scale;
}

void TransverseOps::derivative(std::span<const double> in, int axis,
                               std::span<double> out) const {
  std::vector<std::complex<double>> spec(modes_);
  forward(in, spec);
  for (std::size_t m = 0; m < modes_; ++m) spec[m] *= first_[axis][m];
  backward(spec, out);
}

void TransverseOps::laplacian(std::span<const double> in,
                              std::span<double> out) const {
  std::vector<std::complex<double>> spec(modes_);
  forward(in, spec);
  for (std::size_t m = 0; m < modes_; ++m) spec[m] *= -neg_laplacian_[m];
  backward(spec, out);
}

void TransverseOps::derivative(const LayerField& in, int axis,
                               LayerField& out) const {
  if (out.levels() != in.levels() || out.points() != in.points()) {
    out = LayerField(in.levels(), in.points());
  }
  for (std::size_t j = 0; j < in.levels(); ++j) {
    derivative(in.level(j), axis, out.level(j));
  }
}

void TransverseOps::laplacian(const LayerField& in, LayerField& out) const {
  if (out.levels() != in.levels() || out.points() != in.points()) {
    out = LayerField(in.levels(), in.points());
  }
  for (std::size_t j = 0; j < in.levels(); ++j) {
    laplacian(in.level(j), out.level(j));
  }
}

}  // namespace evapfront
