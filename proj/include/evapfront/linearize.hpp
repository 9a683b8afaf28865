#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "evapfront/fields.hpp"
#include "evapfront/geometry.hpp"
#include "evapfront/symbol.hpp"

namespace evapfront {

/// Frozen coefficients of the linearized interface law
/// ∂_tφ − α⁻φ⁻_z − α⁺φ⁺_z + ζ·∇'φ − ᾱ⁻u⁻_z − ᾱ⁺u⁺_z = g₀,
/// on the interface grid. α and β enter divided by μ.
///
/// σ_z jumps across Γ for the tent map, so each coefficient uses the
/// one-sided σ_z of the phase its field lives in; on a map with a single
/// σ_z the formulas coincide with the textbook ones.
struct BoundaryCoeffs {
  std::vector<double> alpha_minus;
  std::vector<double> alpha_plus;
  std::vector<double> alpha_tilde_minus;
  std::vector<double> alpha_tilde_plus;
  std::vector<std::vector<double>> zeta;  // one array per transverse axis
  std::vector<double> g0;
  double omega1 = 0.0;  // min over Γ of α⁺ − α⁻
};

/// Coefficients from a background state. `sigma_t` is ∂_tσ on Γ (zero when
/// empty).
BoundaryCoeffs frozen_coefficients(const FieldState& background,
                                   const DiffeoMap& diffeo,
                                   const Params& params, const Grid& grid,
                                   std::span<const double> sigma_t = {});

/// Constant coefficients frozen at the transverse mean.
struct MeanCoeffs {
  double alpha_minus = 0.0;
  double alpha_plus = 0.0;
  double alpha_tilde_minus = 0.0;
  double alpha_tilde_plus = 0.0;
  std::vector<double> zeta;
  double g0 = 0.0;
};

MeanCoeffs mean_freeze(const BoundaryCoeffs& coeffs);
/// Coefficients frozen at interface node `point`.
MeanCoeffs point_freeze(const BoundaryCoeffs& coeffs, std::size_t point);

/// Isotropic symbol of the frozen problem: the elliptic phase is reflected
/// onto the upper half-space, so α_s = −α⁻, β_s = α⁺, c = ζ.
SymbolParams to_symbol_params(const MeanCoeffs& frozen);

/// Principal matrix of the transformed operator Δ' − a'·∇'∂_z − a_n∂_zz
/// with σ frozen at its Γ values on one side: ones on the transverse
/// diagonal, −a'_i/2 in the mixed slots, −a_n in the corner.
Eigen::MatrixXd frozen_principal_matrix(std::span<const double> grad_prime,
                                        double d_sigma_dz);

}  // namespace evapfront
