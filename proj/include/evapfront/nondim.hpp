#pragma once

#include <vector>

#include "evapfront/fields.hpp"

namespace evapfront {

/// Dimensional data of the evaporation problem (SI units).
struct PhysicalParams {
  double porosity_m = 0.3;
  double permeability_k = 1e-12;  // m^2
  double viscosity_w = 1e-3;      // Pa s
  double diffusivity_D = 2.5e-5;  // m^2/s
  double density_w = 1000.0;      // kg/m^3
  double density_a = 1.2;         // kg/m^3
  double gravity_g = 9.81;        // m/s^2
  double P_a = 1.0e5;             // Pa
  double P_c = 1.0e3;             // Pa
  double P_0 = 1.0e5;             // Pa
  double nu_star = 0.02;
  double nu_a = 0.01;
  double layer_L = 1.0;           // m
  double level_h = 0.5;           // m
  bool operator==(const PhysicalParams&) const = default;
};

/// Rejects values outside their physical ranges. ν* = ν_a is accepted
/// (it gives β = 0); ν* < ν_a is not.
void validate(const PhysicalParams& phys);

struct NondimResult {
  Params params;
  double time_unit_nondim = 0.0;    // L m μ_w / (k ρ_w g), seconds
  double time_unit_rescaled = 0.0;  // L² / D, seconds
};

/// α = (P_a + P_c − P_0)/(ρ_w g L), β = D ρ_a (ν*−ν_a) m μ_w/(k ρ_w² g L),
/// γ = D m μ_w/(k ρ_w g L), H = h/L, μ = 1 − ρ_a ν*/ρ_w.
NondimResult nondimensionalize(const PhysicalParams& phys,
                               double omega0 = 1e-3);

enum class EquilibriumUnknown { alpha, beta, H };

struct EquilibriumTriple {
  double alpha = 0.0;
  double beta = 0.0;
  double H = 0.0;
};

/// Completes α/H + β/(1−H) = 1 for the chosen unknown; the value passed for
/// the unknown is ignored. Solving for H can give zero, one or two roots in
/// (0, 1); ValidationError when there is none.
std::vector<EquilibriumTriple> solve_equilibrium(EquilibriumUnknown unknown,
                                                 double alpha, double beta,
                                                 double H);

}  // namespace evapfront
