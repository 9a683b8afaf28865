#pragma once

#include <functional>
#include <span>
#include <vector>

#include "evapfront/fields.hpp"
#include "evapfront/geometry.hpp"

namespace evapfront {

/// One-sided z-derivatives of the fields at Γ and |∇'σ|^2 there.
struct InterfaceTraces {
  std::vector<double> pressure_z;  // P_z from below
  std::vector<double> humidity_z;  // ν_z from above
  std::vector<double> grad2;       // |∇'σ|^2 on Γ
};

InterfaceTraces interface_traces(const FieldState& fields,
                                 const DiffeoMap& diffeo, const Grid& grid);

/// Right side of the transformed kinematic law divided by mu:
/// [(1+|∇'σ|^2)(-α P_z/(1+σ_z^-) + β ν_z/(1+σ_z^+)) + 1] / μ.
std::vector<double> interface_normal_flux(const FieldState& fields,
                                          const DiffeoMap& diffeo,
                                          const Params& params,
                                          const Grid& grid);

/// Pointwise well-posedness margin.
///
/// `margin` is sign(μ) ∂_n[βν + αP] with α, β in the physical convention;
/// the condition holds when its maximum is <= -ω0. `omega1` is the
/// strict-parabolicity gap α⁺ - α⁻ of the linearized boundary law, in
/// the divided-by-μ convention.
struct WellposednessReport {
  std::vector<double> margin;
  double worst = 0.0;
  bool satisfied = false;
  std::vector<double> omega1;
  double omega1_min = 0.0;
  double omega0 = 0.0;
};

WellposednessReport check_wellposedness(const FieldState& fields,
                                        const DiffeoMap& diffeo,
                                        const Params& params,
                                        const Grid& grid);

/// Explicit Euler predictor η* = η + dt f(η).
InterfaceState heun_predict(const InterfaceState& eta,
                            std::span<const double> flux, double dt);

/// Heun corrector η + dt/2 (f(η) + f(η*)).
InterfaceState heun_correct(const InterfaceState& eta,
                            std::span<const double> flux,
                            std::span<const double> flux_predicted, double dt);

using FluxFunction = std::function<std::vector<double>(const InterfaceState&)>;

struct MarginSpec {
  double H = 0.5;
  double gamma_margin = 0.05;
};

/// Heun step driven by `flux`; throws HaltError if the predictor or the
/// result leaves the admissible band.
InterfaceState step_interface(const InterfaceState& eta,
                              const FluxFunction& flux, double dt,
                              const MarginSpec& margin);

}  // namespace evapfront
