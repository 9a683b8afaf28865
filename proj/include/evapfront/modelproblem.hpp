#pragma once

#include <functional>
#include <span>
#include <vector>

#include "evapfront/fields.hpp"
#include "evapfront/symbol.hpp"

namespace evapfront {

/// One Fourier mode of the half-space model problem.
struct ModeSolution {
  std::vector<double> k;
  std::vector<double> times;            // 0, dt, 2dt, ..., T
  std::vector<Complex> phi_hat;         // boundary amplitude at each time
  std::vector<double> depth;            // depth nodes of the stored profiles
  std::vector<Complex> phi_minus_profile;  // elliptic phase at time T
  std::vector<Complex> phi_plus_profile;   // parabolic phase at time T
  double truncation_depth = 0.0;
};

struct HalfspaceOptions {
  double depth_factor = 8.0;  // truncation depth = depth_factor / |k| ...
  double depth_cap = 64.0;    // ... but never more than this
  double max_spacing = 0.02;  // depth-grid spacing bound
  bool check_depth = true;    // rerun at twice the depth and compare
};

using ForcingFunction = std::function<Complex(double)>;

/// Integrates ∂_tφ̂ = −α|k|φ̂ + β∂_xφ⁺(0) + i c·k φ̂ + ĝ(t), φ̂(0) = 0, where
/// φ⁺ solves (∂_t + |k|² − ∂_x²)φ⁺ = 0 on [0, D] with φ⁺(0) = φ̂ and the
/// absorbing condition ∂_xφ⁺ + |k|φ⁺ = 0 at x = D. Crank–Nicolson in time,
/// second-order differences in x. The elliptic profile is e^{−|k|x}φ̂.
///
/// Throws ValidationError unless α + β > 0, dt > 0, T > 0 and g(0) = 0;
/// NumericalError when doubling D moves φ̂ by more than 1%.
ModeSolution solve_halfspace_mode(const SymbolParams& p,
                                  std::span<const double> k,
                                  const ForcingFunction& g, double T,
                                  double dt,
                                  const HalfspaceOptions& options = {});

struct ShootingOptions {
  int min_steps = 2000;   // RK4 steps per phase, at least
  double tol = 1e-12;     // on |F(λ)|
  int max_iter = 60;
};

/// Growth rate of mode k of the flat front: frozen coefficients from the
/// flat background, ψ⁻ shot upward from ψ⁻(0) = 0, ψ⁺ shot downward from
/// ψ⁺(1) = 0, and Newton on F(λ) = λ − α⁻ψ⁻'/ψ⁻ − α⁺ψ⁺'/ψ⁺ at z = H.
DispersionRoot flat_front_growth_rate(const Params& params, double k,
                                      const ShootingOptions& options = {});

}  // namespace evapfront
