#include "evapfront/modelproblem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "evapfront/errors.hpp"
#include "evapfront/linearize.hpp"

namespace evapfront {

namespace {

const Complex kI{0.0, 1.0};

struct Run {
  std::vector<Complex> phi_hat;
  Eigen::VectorXcd last;
  double h = 0.0;
};

Run integrate(const SymbolParams& p, double km, double ck,
              const ForcingFunction& g, int steps, double dt, double depth,
              double max_spacing) {
  const int n = std::max(16, static_cast<int>(std::ceil(depth / max_spacing)));
  const double h = depth / n;
  const double ih2 = 1.0 / (h * h);
  const double k2 = km * km;

  // Unknowns 0..n; row 0 is the boundary amplitude.
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.emplace_back(0, 0, Complex(-p.alpha_s * km) + kI * ck -
                              p.beta_s * 3.0 / (2.0 * h));
  trip.emplace_back(0, 1, p.beta_s * 4.0 / (2.0 * h));
  trip.emplace_back(0, 2, -p.beta_s / (2.0 * h));
  for (int j = 1; j < n; ++j) {
    trip.emplace_back(j, j - 1, ih2);
    trip.emplace_back(j, j, -2.0 * ih2 - k2);
    trip.emplace_back(j, j + 1, ih2);
  }
  // Ghost node from ∂_xφ + |k|φ = 0 at the truncated end.
  trip.emplace_back(n, n - 1, 2.0 * ih2);
  trip.emplace_back(n, n, -2.0 * ih2 - 2.0 * km / h - k2);
  Eigen::SparseMatrix<Complex> A(n + 1, n + 1);
  A.setFromTriplets(trip.begin(), trip.end());

  Eigen::SparseMatrix<Complex> I(n + 1, n + 1);
  I.setIdentity();
  const Eigen::SparseMatrix<Complex> lhs = I - (0.5 * dt) * A;
  const Eigen::SparseMatrix<Complex> rhs = I + (0.5 * dt) * A;
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(lhs);
  if (lu.info() != Eigen::Success) {
    throw NumericalError("model problem: factorization failed");
  }

  Run run;
  run.h = h;
  run.phi_hat.reserve(static_cast<std::size_t>(steps) + 1);
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n + 1);
  run.phi_hat.push_back(0.0);
  Complex g_prev = g(0.0);
  for (int s = 1; s <= steps; ++s) {
    const Complex g_next = g(s * dt);
    Eigen::VectorXcd b = rhs * u;
    b(0) += 0.5 * dt * (g_prev + g_next);
    u = lu.solve(b);
    run.phi_hat.push_back(u(0));
    g_prev = g_next;
  }
  run.last = std::move(u);
  return run;
}

}  // namespace

ModeSolution solve_halfspace_mode(const SymbolParams& p,
                                  std::span<const double> k,
                                  const ForcingFunction& g, double T,
                                  double dt, const HalfspaceOptions& opt) {
  if (!(p.constraint_sum > 0.0)) {
    throw ValidationError("model problem: requires alpha + beta > 0");
  }
  if (!(T > 0.0) || !(dt > 0.0) || dt > T) {
    throw ValidationError("model problem: requires 0 < dt <= T");
  }
  if (p.c.size() != k.size()) {
    throw ValidationError("model problem: c and k have different lengths");
  }
  double km = 0.0;
  double ck = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    km += k[i] * k[i];
    ck += p.c[i] * k[i];
  }
  km = std::sqrt(km);
  if (!(km > 0.0)) throw ValidationError("model problem: k must be nonzero");
  if (std::abs(g(0.0)) > 1e-14) {
    throw ValidationError("model problem: forcing must vanish at t = 0");
  }
  const int steps = static_cast<int>(std::llround(T / dt));
  const double depth = std::min(opt.depth_factor / km, opt.depth_cap);

  Run run = integrate(p, km, ck, g, steps, dt, depth, opt.max_spacing);
  if (opt.check_depth) {
    const Run wide = integrate(p, km, ck, g, steps, dt, 2.0 * depth,
                               opt.max_spacing);
    double scale = 0.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < run.phi_hat.size(); ++i) {
      scale = std::max(scale, std::abs(wide.phi_hat[i]));
      diff = std::max(diff, std::abs(wide.phi_hat[i] - run.phi_hat[i]));
    }
    if (scale > 0.0 && diff > 0.01 * scale) {
      std::ostringstream msg;
      msg << "model problem: truncation depth " << depth
          << " too small, doubling it moves the amplitude by "
          << 100.0 * diff / scale << "%";
      throw NumericalError(msg.str());
    }
  }

  ModeSolution sol;
  sol.k.assign(k.begin(), k.end());
  sol.truncation_depth = depth;
  sol.times.resize(run.phi_hat.size());
  for (std::size_t i = 0; i < sol.times.size(); ++i) sol.times[i] = i * dt;
  sol.phi_hat = std::move(run.phi_hat);
  const Eigen::Index n = run.last.size();
  const Complex top = sol.phi_hat.back();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double x = j * run.h;
    sol.depth.push_back(x);
    sol.phi_minus_profile.push_back(std::exp(-km * x) * top);
    sol.phi_plus_profile.push_back(run.last(j));
  }
  return sol;
}

namespace {

// Log-derivative ψ'/ψ at the far end of a shot of ψ'' = q ψ over length L
// started from ψ = 0, ψ' = 1.
Complex shoot(Complex q, double L, int steps) {
  const double h = L / steps;
  Complex y = 0.0;
  Complex dy = 1.0;
  for (int i = 0; i < steps; ++i) {
    const Complex k1y = dy, k1d = q * y;
    const Complex k2y = dy + 0.5 * h * k1d, k2d = q * (y + 0.5 * h * k1y);
    const Complex k3y = dy + 0.5 * h * k2d, k3d = q * (y + 0.5 * h * k2y);
    const Complex k4y = dy + h * k3d, k4d = q * (y + h * k3y);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
  }
  return dy / y;
}

}  // namespace

DispersionRoot flat_front_growth_rate(const Params& params, double k,
                                      const ShootingOptions& opt) {
  validate(params);
  if (!(k != 0.0) || !std::isfinite(k)) {
    throw ValidationError("flat_front_growth_rate: k must be finite and nonzero");
  }
  const double km = std::abs(k);

  // Flat background on a small grid: the linear profiles are exact at the
  // nodes, so the one-sided traces are exact too.
  const Grid grid = build_grid(4, 16, 16, params.H);
  const Discretization disc(grid, TransverseScheme::spectral);
  const InterfaceState flat{std::vector<double>(grid.points(), 0.0), 0.0};
  const DiffeoMap map = build_diffeomorphism(flat, disc);
  FieldState bg{linear_pressure_profile(grid), steady_humidity_profile(grid),
                0.0};
  const MeanCoeffs fc =
      mean_freeze(frozen_coefficients(bg, map, params, grid));

  const double H = params.H;
  const int steps_lower =
      std::max(opt.min_steps, static_cast<int>(200.0 * km * H));
  const int steps_upper =
      std::max(opt.min_steps, static_cast<int>(200.0 * km * (1.0 - H)));
  const Complex r_minus = shoot(km * km, H, steps_lower);
  auto F = [&](Complex lambda) {
    // Shooting downward from z = 1 is the upward shot in 1 − z, whose
    // derivative changes sign.
    const Complex r_plus = -shoot(lambda + km * km, 1.0 - H, steps_upper);
    return lambda - fc.alpha_minus * r_minus - fc.alpha_plus * r_plus;
  };

  Complex lambda = F(0.0);  // one fixed-point sweep from λ = 0
  Complex f = F(lambda);
  int it = 0;
  while (std::abs(f) >= opt.tol) {
    if (++it > opt.max_iter) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "flat_front_growth_rate: shooting did not converge, last lambda="
          << lambda << " residual=" << std::abs(f);
      throw NumericalError(msg.str());
    }
    const double eps = 1e-7 * std::max(1.0, std::abs(lambda));
    const Complex df = (F(lambda + eps) - F(lambda - eps)) / (2.0 * eps);
    Complex step = f / df;
    Complex trial = lambda - step;
    Complex ft = F(trial);
    for (int d = 0; d < 30 && std::abs(ft) > std::abs(f); ++d) {
      step *= 0.5;
      trial = lambda - step;
      ft = F(trial);
    }
    lambda = trial;
    f = ft;
  }
  DispersionRoot out;
  out.k = {k};
  out.lambda = lambda;
  out.residual = std::abs(f);
  out.iterations = it;
  out.branch_note = "shooting on the flat layered eigenproblem";
  return out;
}

}  // namespace evapfront
