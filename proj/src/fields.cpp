#include "evapfront/fields.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/IterativeSolvers>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "evapfront/errors.hpp"
#include "evapfront/mode_solver.hpp"

namespace evapfront::detail {
class InteriorOperator;
}

namespace Eigen::internal {
template <>
struct traits<evapfront::detail::InteriorOperator>
    : public Eigen::internal::traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace evapfront {
namespace detail {

// Matrix-free operator for Eigen's GMRES.
class InteriorOperator : public Eigen::EigenBase<InteriorOperator> {
 public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum {
    ColsAtCompileTime = Eigen::Dynamic,
    MaxColsAtCompileTime = Eigen::Dynamic,
    IsRowMajor = false
  };

  Eigen::Index rows() const { return size; }
  Eigen::Index cols() const { return size; }

  template <typename Rhs>
  Eigen::Product<InteriorOperator, Rhs, Eigen::AliasFreeProduct> operator*(
      const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<InteriorOperator, Rhs, Eigen::AliasFreeProduct>(
        *this, x.derived());
  }

  Eigen::Index size = 0;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> apply;
};

class ModePreconditioner {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  template <typename M>
  ModePreconditioner& analyzePattern(const M&) { return *this; }
  template <typename M>
  ModePreconditioner& factorize(const M&) { return *this; }
  template <typename M>
  ModePreconditioner& compute(const M&) { return *this; }
  Eigen::ComputationInfo info() { return Eigen::Success; }

  template <typename Rhs>
  Eigen::VectorXd solve(const Rhs& b) const {
    Eigen::VectorXd x;
    apply(Eigen::VectorXd(b), x);
    return x;
  }

  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> apply;
};

}  // namespace detail
}  // namespace evapfront

namespace Eigen::internal {
template <typename Rhs>
struct generic_product_impl<evapfront::detail::InteriorOperator, Rhs,
                            SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<
          evapfront::detail::InteriorOperator, Rhs,
          generic_product_impl<evapfront::detail::InteriorOperator, Rhs>> {
  using Scalar =
      typename Product<evapfront::detail::InteriorOperator, Rhs>::Scalar;

  template <typename Dest>
  static void scaleAndAddTo(Dest& dst,
                            const evapfront::detail::InteriorOperator& lhs,
                            const Rhs& rhs, const Scalar& alpha) {
    Eigen::VectorXd y;
    lhs.apply(Eigen::VectorXd(rhs), y);
    dst.noalias() += alpha * y;
  }
};
}  // namespace Eigen::internal

namespace evapfront {

void validate(const Params& p) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(p.alpha) || !finite(p.beta) || !finite(p.gamma_diff) ||
      !finite(p.mu) || !finite(p.H) || !finite(p.omega0)) {
    throw ValidationError("parameters must be finite");
  }
  if (!(p.gamma_diff > 0.0)) throw ValidationError("gamma_diff must be > 0");
  if (p.mu == 0.0) throw ValidationError("mu must be nonzero");
  if (!(p.H > 0.0 && p.H < 1.0)) throw ValidationError("H must lie in (0,1)");
  if (!(p.omega0 > 0.0)) throw ValidationError("omega0 must be > 0");
}

LayerField linear_pressure_profile(const Grid& g) {
  LayerField P(g.n_lower + 1, g.points());
  for (int j = 0; j <= g.n_lower; ++j) {
    const double v = j == g.n_lower ? 1.0 : g.z_lower[j] / g.H;
    for (std::size_t p = 0; p < g.points(); ++p) P(j, p) = v;
  }
  return P;
}

LayerField steady_humidity_profile(const Grid& g) {
  LayerField nu(g.n_upper + 1, g.points());
  for (int j = 0; j <= g.n_upper; ++j) {
    const double v = j == 0 ? 1.0 : (1.0 - g.z_upper[j]) / (1.0 - g.H);
    for (std::size_t p = 0; p < g.points(); ++p) nu(j, p) = v;
  }
  return nu;
}

void apply_transformed_operator(const SubdomainMetric& m,
                                const TransverseOps& ops, const LayerField& u,
                                LayerField& out) {
  const std::size_t levels = u.levels();
  const std::size_t np = u.points();
  const int dims = ops.dims();
  if (out.levels() != levels || out.points() != np) out = LayerField(levels, np);

  const double inv_2h = 1.0 / (2.0 * m.h);
  const double inv_h2 = 1.0 / (m.h * m.h);
  std::vector<double> uz(np), uzz(np), lap(np);
  std::vector<std::vector<double>> grad_uz(dims, std::vector<double>(np));

  for (std::size_t p = 0; p < np; ++p) {
    out(0, p) = 0.0;
    out(levels - 1, p) = 0.0;
  }
  for (std::size_t j = 1; j + 1 < levels; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      uz[p] = inv_2h * (u(j + 1, p) - u(j - 1, p));
      uzz[p] = inv_h2 * (u(j + 1, p) - 2.0 * u(j, p) + u(j - 1, p));
    }
    ops.laplacian(u.level(j), lap);
    for (int a = 0; a < dims; ++a) ops.derivative(uz, a, grad_uz[a]);
    for (std::size_t p = 0; p < np; ++p) {
      double v = lap[p] - m.metric_a[dims](j, p) * uzz[p];
      for (int a = 0; a < dims; ++a) v -= m.metric_a[a](j, p) * grad_uz[a][p];
      v -= uz[p] / m.jacobian(j, p) * m.a_sigma(j, p);
      out(j, p) = v;
    }
  }
}

namespace {

double interior_max_abs(const LayerField& f) {
  double v = 0.0;
  for (std::size_t j = 1; j + 1 < f.levels(); ++j) {
    for (double x : f.level(j)) v = std::max(v, std::abs(x));
  }
  return v;
}

// Level-wise transverse means of the ∂_zz and ∂_z coefficients of N_σ, plus
// a flag telling whether they are transverse-constant (so the banded solve
// is exact).
struct LevelCoefficients {
  std::vector<double> c;
  std::vector<double> b;
  bool transverse_constant = true;
};

LevelCoefficients level_coefficients(const SubdomainMetric& m, int dims) {
  const std::size_t levels = m.sigma.levels();
  const std::size_t np = m.sigma.points();
  LevelCoefficients lc;
  lc.c.resize(levels - 2);
  lc.b.resize(levels - 2);
  constexpr double kTol = 1e-13;
  for (std::size_t j = 1; j + 1 < levels; ++j) {
    double cmin = 1e300, cmax = -1e300, bmin = 1e300, bmax = -1e300;
    double csum = 0.0, bsum = 0.0, mixed = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
      const double c = -m.metric_a[dims](j, p);
      const double b = -m.a_sigma(j, p) / m.jacobian(j, p);
      csum += c;
      bsum += b;
      cmin = std::min(cmin, c);
      cmax = std::max(cmax, c);
      bmin = std::min(bmin, b);
      bmax = std::max(bmax, b);
      for (int a = 0; a < dims; ++a) {
        mixed = std::max(mixed, std::abs(m.metric_a[a](j, p)));
      }
    }
    lc.c[j - 1] = csum / np;
    lc.b[j - 1] = bsum / np;
    if (cmax - cmin > kTol * std::max(1.0, cmax) ||
        bmax - bmin > kTol * std::max(1.0, std::abs(bmax)) || mixed > kTol) {
      lc.transverse_constant = false;
    }
  }
  return lc;
}

void to_vector(const LayerField& f, Eigen::VectorXd& v) {
  const std::size_t np = f.points();
  const std::size_t interior = f.levels() - 2;
  v.resize(static_cast<Eigen::Index>(interior * np));
  for (std::size_t j = 0; j < interior; ++j) {
    for (std::size_t p = 0; p < np; ++p) v[j * np + p] = f(j + 1, p);
  }
}

void from_vector(const Eigen::VectorXd& v, LayerField& f) {
  const std::size_t np = f.points();
  const std::size_t interior = f.levels() - 2;
  for (std::size_t p = 0; p < np; ++p) {
    f(0, p) = 0.0;
    f(interior + 1, p) = 0.0;
  }
  for (std::size_t j = 0; j < interior; ++j) {
    for (std::size_t p = 0; p < np; ++p) f(j + 1, p) = v[j * np + p];
  }
}

}  // namespace

PressureSolve solve_pressure(const DiffeoMap& diffeo,
                             const Discretization& disc,
                             const EllipticOptions& options,
                             const LayerField* source) {
  const Grid& g = disc.grid();
  const TransverseOps& ops = disc.ops();
  const SubdomainMetric& m = diffeo.lower;
  const std::size_t levels = static_cast<std::size_t>(g.n_lower + 1);
  const std::size_t np = g.points();

  // P = lift + w with w = 0 on both end levels.
  const LayerField lift = linear_pressure_profile(g);
  LayerField rhs;
  apply_transformed_operator(m, ops, lift, rhs);
  for (std::size_t j = 1; j + 1 < levels; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      rhs(j, p) = -rhs(j, p) - (source ? (*source)(j, p) : 0.0);
    }
  }
  const double rhs_scale = std::max(1.0, interior_max_abs(rhs));

  const LevelCoefficients lc = level_coefficients(m, g.transverse_dims);
  const ModeBandedSolver banded(ops, m.h, lc.c, lc.b, 0.0);

  PressureSolve result;
  LayerField w(levels, np);
  LayerField residual(levels, np);
  auto residual_norm = [&](const LayerField& trial) {
    apply_transformed_operator(m, ops, trial, residual);
    double r = 0.0;
    for (std::size_t j = 1; j + 1 < levels; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        r = std::max(r, std::abs(residual(j, p) - rhs(j, p)));
      }
    }
    // Backward-error scaling: the stencil amplifies roundoff in w by 1/h².
    const double hmin = std::min(m.h, 1.0 / g.n_transverse);
    return r / std::max(rhs_scale, interior_max_abs(trial) / (hmin * hmin));
  };

  bool solved = false;
  if (lc.transverse_constant) {
    banded.solve(rhs, w);
    result.residual = residual_norm(w);
    result.direct = true;
    solved = result.residual <= options.tol;
  }

  if (!solved) {
    result.direct = false;
    detail::InteriorOperator op;
    op.size = static_cast<Eigen::Index>((levels - 2) * np);
    op.apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
      LayerField in(levels, np), out;
      from_vector(x, in);
      apply_transformed_operator(m, ops, in, out);
      to_vector(out, y);
    };
    Eigen::GMRES<detail::InteriorOperator, detail::ModePreconditioner> gmres;
    gmres.preconditioner().apply = [&](const Eigen::VectorXd& x,
                                       Eigen::VectorXd& y) {
      LayerField in(levels, np), out(levels, np);
      from_vector(x, in);
      banded.solve(in, out);
      to_vector(out, y);
    };
    gmres.set_restart(options.restart);
    gmres.setMaxIterations(options.max_iter);
    gmres.setTolerance(1e-14);
    gmres.compute(op);

    Eigen::VectorXd b, x;
    to_vector(rhs, b);
    x = gmres.solve(b);
    from_vector(x, w);
    result.iterations = static_cast<int>(gmres.iterations());
    result.residual = residual_norm(w);
    if (!(result.residual <= options.tol)) {
      std::ostringstream msg;
      msg << "pressure solve did not converge: relative residual "
          << result.residual << " after " << result.iterations
          << " GMRES iterations (tol " << options.tol << ")";
      throw NumericalError(msg.str());
    }
  }

  result.pressure = lift;
  for (std::size_t j = 1; j + 1 < levels; ++j) {
    for (std::size_t p = 0; p < np; ++p) result.pressure(j, p) += w(j, p);
  }
  return result;
}

LayerField step_humidity(const LayerField& humidity, const DiffeoMap& now,
                         const DiffeoMap& next, double dt,
                         const Discretization& disc, const LayerField* source) {
  if (!(dt > 0.0)) {
    throw ValidationError("humidity step needs dt > 0, got " + std::to_string(dt));
  }
  const Grid& g = disc.grid();
  const TransverseOps& ops = disc.ops();
  const SubdomainMetric& m = next.upper;
  const int dims = g.transverse_dims;
  const std::size_t levels = static_cast<std::size_t>(g.n_upper + 1);
  const std::size_t np = g.points();
  if (humidity.levels() != levels || humidity.points() != np) {
    throw ValidationError("humidity field does not match the grid");
  }

  std::vector<double> cmax(levels - 2), zero(levels - 2, 0.0);
  for (std::size_t j = 1; j + 1 < levels; ++j) {
    double c = -1e300;
    for (std::size_t p = 0; p < np; ++p) c = std::max(c, -m.metric_a[dims](j, p));
    cmax[j - 1] = c;
  }

  LayerField full;
  apply_transformed_operator(m, ops, humidity, full);

  const double inv_2h = 1.0 / (2.0 * m.h);
  const double inv_h2 = 1.0 / (m.h * m.h);
  std::vector<double> lap(np);
  LayerField rhs(levels, np);
  for (std::size_t j = 1; j + 1 < levels; ++j) {
    ops.laplacian(humidity.level(j), lap);
    for (std::size_t p = 0; p < np; ++p) {
      const double uz = inv_2h * (humidity(j + 1, p) - humidity(j - 1, p));
      const double uzz = inv_h2 * (humidity(j + 1, p) - 2.0 * humidity(j, p) +
                                   humidity(j - 1, p));
      const double implicit_part = lap[p] + cmax[j - 1] * uzz;
      const double sigma_t = (m.sigma(j, p) - now.upper.sigma(j, p)) / dt;
      const double explicit_part =
          full(j, p) - implicit_part + uz * sigma_t / m.jacobian(j, p);
      rhs(j, p) = humidity(j, p) + dt * explicit_part +
                  (source ? dt * (*source)(j, p) : 0.0);
    }
  }

  // ν = lift + w; (I - dt L0) w = rhs - (I - dt L0) lift on interior levels.
  const LayerField lift = steady_humidity_profile(g);
  for (std::size_t j = 1; j + 1 < levels; ++j) {
    const double lzz =
        inv_h2 * (lift(j + 1, 0) - 2.0 * lift(j, 0) + lift(j - 1, 0));
    const double l0 = lift(j, 0) - dt * cmax[j - 1] * lzz;
    for (std::size_t p = 0; p < np; ++p) {
      // Written as (c D_zz + Δ' - 1/dt) w = -(...)/dt for the banded solver.
      rhs(j, p) = -(rhs(j, p) - l0) / dt;
    }
  }
  const ModeBandedSolver implicit(ops, m.h, cmax, zero, 1.0 / dt);
  LayerField w(levels, np);
  implicit.solve(rhs, w);

  LayerField out = lift;
  for (std::size_t j = 1; j + 1 < levels; ++j) {
    for (std::size_t p = 0; p < np; ++p) out(j, p) += w(j, p);
  }
  return out;
}

void impose_boundary_rows(FieldState& s) {
  const std::size_t top = s.pressure.levels() - 1;
  const std::size_t last = s.humidity.levels() - 1;
  for (std::size_t p = 0; p < s.pressure.points(); ++p) {
    s.pressure(0, p) = 0.0;
    s.pressure(top, p) = 1.0;
  }
  for (std::size_t p = 0; p < s.humidity.points(); ++p) {
    s.humidity(0, p) = 1.0;
    s.humidity(last, p) = 0.0;
  }
}

bool satisfies_maximum_principle(const FieldState& s, double tol) {
  return s.pressure.min() >= -tol && s.pressure.max() <= 1.0 + tol &&
         s.humidity.min() >= -tol && s.humidity.max() <= 1.0 + tol;
}

}  // namespace evapfront
