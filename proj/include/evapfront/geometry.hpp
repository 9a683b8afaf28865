#pragma once

#include <span>
#include <vector>

#include "evapfront/grid.hpp"
#include "evapfront/transverse.hpp"

namespace evapfront {

/// Grid plus the transverse operators built for it. Solvers take this
/// instead of a bare Grid so FFT plans are created once per run.
class Discretization {
 public:
  Discretization(Grid grid, TransverseScheme scheme);

  const Grid& grid() const { return grid_; }
  const TransverseOps& ops() const { return ops_; }
  TransverseScheme scheme() const { return ops_.scheme(); }

 private:
  Grid grid_;
  TransverseOps ops_;
};

struct GeometryOptions {
  double delta_j = 0.1;       // floor for 1 + dσ/dz
  double gamma_margin = 0.05; // interface must stay in (γ_m - H, 1 - γ_m - H)
};

/// Interface height offset η over the transverse grid.
struct InterfaceState {
  std::vector<double> eta;
  double time = 0.0;

  bool operator==(const InterfaceState&) const = default;
};

/// True when every η(x') lies strictly inside (γ_m - H, 1 - γ_m - H).
bool within_margin(const InterfaceState& state, double H, double gamma_margin);

/// Throws HaltError naming the first offending node.
void check_margin(const InterfaceState& state, double H, double gamma_margin);

/// σ and everything the transformed operators need from it, on one phase.
struct SubdomainMetric {
  double h = 0.0;                        // z-spacing of this phase
  LayerField sigma;
  LayerField sigma_z;                    // centered, one-sided at both ends
  LayerField sigma_zz;                   // interior levels only
  std::vector<LayerField> grad_sigma;    // ∇'σ, one field per transverse axis
  std::vector<LayerField> grad_sigma_z;  // ∇'σ_z
  LayerField lap_sigma;                  // Δ'σ
  LayerField jacobian;                   // 1 + σ_z
  std::vector<LayerField> metric_a;      // a(∇σ): transverse components then normal
  LayerField a_sigma;                    // A_σ σ at interior levels
};

/// Fixed-domain map (z', z_n) -> (z', z_n + σ) of both phases.
///
/// The analytic construction behind the well-posedness theory extends η
/// biharmonically and blends it with compressed outer slabs of slope γ/4
/// through a cutoff χ; that machinery serves low-regularity traces. On a
/// grid the tent profile σ = η s(z_n), s(0) = 0, s(H) = 1, s(1) = 0 gives
/// the same trace, boundary and positivity guarantees and is trivially
/// invertible. σ is continuous across z = H but its z-derivative jumps, so
/// the two one-sided derivatives are kept apart.
struct DiffeoMap {
  std::vector<double> eta;
  SubdomainMetric lower;
  SubdomainMetric upper;
  std::vector<double> d_sigma_dz_minus;             // σ_z on Γ from below
  std::vector<double> d_sigma_dz_plus;              // σ_z on Γ from above
  std::vector<std::vector<double>> grad_prime_sigma;  // ∇'σ on Γ
  double min_jacobian = 1.0;
};

DiffeoMap build_diffeomorphism(const InterfaceState& eta,
                               const Discretization& disc,
                               const GeometryOptions& options = {});

/// Derived quantities for an arbitrary σ pair (continuous at z = H,
/// vanishing on z = 0 and z = 1). Used by build_diffeomorphism and by
/// tests that need other profiles.
DiffeoMap diffeomorphism_from_sigma(LayerField sigma_lower,
                                    LayerField sigma_upper,
                                    const Discretization& disc,
                                    const GeometryOptions& options = {});

/// a(∇φ) = (2∇'φ/(1+φ_z), -(1+|∇'φ|^2)/(1+φ_z)^2). Throws
/// DegenerateMapError when 1 + φ_z is not positive.
std::vector<double> metric_coefficients(std::span<const double> grad_prime,
                                        double d_sigma_dz);

/// Second-order z-derivative: centered inside, one-sided at both ends.
LayerField vertical_derivative(const LayerField& u, double h);

}  // namespace evapfront
