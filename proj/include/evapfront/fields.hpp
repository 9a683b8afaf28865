#pragma once

#include "evapfront/geometry.hpp"
#include "evapfront/grid.hpp"

namespace evapfront {

/// Dimensionless constants of the transformed problem.
///
/// alpha and beta are stored in the physical convention; routines that
/// need the "divided by mu" convention of the linear analysis apply it
/// themselves and say so in their output. gamma_diff is the diffusivity
/// number before the last time rescaling; the simulator evolves the
/// rescaled system (unit diffusivity) and uses gamma_diff only to report
/// time units.
struct Params {
  double alpha = 0.1;
  double beta = 0.4;
  double gamma_diff = 1.0;
  double mu = 1.0;
  double H = 0.5;
  double omega0 = 1e-3;

  bool operator==(const Params&) const = default;
};

/// Rejects nonfinite values, gamma_diff <= 0, mu == 0, H outside (0,1),
/// omega0 <= 0. alpha and beta may take any sign.
void validate(const Params& params);

/// Transformed pressure on the lower grid and humidity on the upper grid.
struct FieldState {
  LayerField pressure;  // levels 0..n_lower, row n_lower is Γ
  LayerField humidity;  // levels 0..n_upper, row 0 is Γ
  double time = 0.0;

  bool operator==(const FieldState&) const = default;
};

struct EllipticOptions {
  double tol = 1e-10;  // bound on the relative max-norm residual
  int max_iter = 300;
  int restart = 50;
};

struct PressureSolve {
  LayerField pressure;
  double residual = 0.0;  // max-norm residual / max(1, |rhs|, |w|/h²)
  int iterations = 0;
  bool direct = false;    // true when the per-mode banded solve was exact
};

/// Pressure row P = z/H (flat solution) for this grid.
LayerField linear_pressure_profile(const Grid& grid);
/// Humidity row ν = (1 - z)/(1 - H) (flat steady solution).
LayerField steady_humidity_profile(const Grid& grid);

/// N_σ u = A_σ u - u_z/(1+σ_z) A_σ σ on interior levels; end levels of
/// `out` are zero.
void apply_transformed_operator(const SubdomainMetric& metric,
                                const TransverseOps& ops, const LayerField& u,
                                LayerField& out);

/// Solves N_σ P + source = 0 in the lower phase with P = 0 on z = 0 and
/// P = 1 on Γ. Transverse-constant coefficients are solved directly per
/// mode; otherwise GMRES runs with that solve as preconditioner.
PressureSolve solve_pressure(const DiffeoMap& diffeo,
                             const Discretization& disc,
                             const EllipticOptions& options = {},
                             const LayerField* source = nullptr);

/// One IMEX Euler step of ν_t = N_σ ν + ν_z σ_t/(1+σ_z) + source.
///
/// Implicit part: Δ' + c_max(z) ∂_zz, c_max the level-wise maximum of the
/// ∂_zz coefficient (1 on flat maps), so the remainder moved to the
/// explicit side is nonpositive. σ_t is the backward difference of the two
/// maps, metric terms use `next`, and `source` is taken at the new time.
LayerField step_humidity(const LayerField& humidity, const DiffeoMap& now,
                         const DiffeoMap& next, double dt,
                         const Discretization& disc,
                         const LayerField* source = nullptr);

/// Writes the Dirichlet rows of both fields.
void impose_boundary_rows(FieldState& state);

/// True when both fields stay inside [-tol, 1 + tol].
bool satisfies_maximum_principle(const FieldState& state, double tol);

}  // namespace evapfront
