#include "evapfront/nondim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evapfront/errors.hpp"

namespace evapfront {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("physical parameters: " + what);
}

}  // namespace

void validate(const PhysicalParams& p) {
  for (double v : {p.porosity_m, p.permeability_k, p.viscosity_w,
                   p.diffusivity_D, p.density_w, p.density_a, p.gravity_g,
                   p.P_a, p.P_c, p.P_0, p.nu_star, p.nu_a, p.layer_L,
                   p.level_h}) {
    require(std::isfinite(v), "values must be finite");
  }
  require(p.porosity_m > 0.0 && p.porosity_m < 1.0, "porosity must lie in (0,1)");
  require(p.permeability_k > 0.0, "permeability must be positive");
  require(p.viscosity_w > 0.0, "viscosity must be positive");
  require(p.diffusivity_D > 0.0, "diffusivity must be positive");
  require(p.density_w > 0.0 && p.density_a > 0.0, "densities must be positive");
  require(p.gravity_g > 0.0, "gravity must be positive");
  require(p.nu_star > 0.0 && p.nu_star < 1.0, "nu_star must lie in (0,1)");
  require(p.nu_a > 0.0 && p.nu_a < 1.0, "nu_a must lie in (0,1)");
  require(p.nu_star >= p.nu_a, "nu_star must not be below nu_a");
  require(p.layer_L > 0.0, "layer depth must be positive");
  require(p.level_h > 0.0 && p.level_h < p.layer_L,
          "level height must lie in (0, L)");
}

NondimResult nondimensionalize(const PhysicalParams& p, double omega0) {
  validate(p);
  const double rgL = p.density_w * p.gravity_g * p.layer_L;
  const double darcy = p.porosity_m * p.viscosity_w / p.permeability_k;
  NondimResult r;
  r.params.alpha = (p.P_a + p.P_c - p.P_0) / rgL;
  r.params.beta = p.diffusivity_D * p.density_a * (p.nu_star - p.nu_a) *
                  darcy / (p.density_w * rgL);
  r.params.gamma_diff = p.diffusivity_D * darcy / rgL;
  r.params.H = p.level_h / p.layer_L;
  r.params.mu = 1.0 - p.density_a * p.nu_star / p.density_w;
  r.params.omega0 = omega0;
  if (r.params.mu == 0.0) {
    throw ValidationError("physical parameters: mobility factor mu vanishes");
  }
  r.time_unit_nondim = p.layer_L * darcy / (p.density_w * p.gravity_g);
  r.time_unit_rescaled = p.layer_L * p.layer_L / p.diffusivity_D;
  return r;
}

std::vector<EquilibriumTriple> solve_equilibrium(EquilibriumUnknown unknown,
                                                 double alpha, double beta,
                                                 double H) {
  auto finite = [](double v) { return std::isfinite(v); };
  switch (unknown) {
    case EquilibriumUnknown::alpha:
      if (!finite(beta) || !(H > 0.0 && H < 1.0)) {
        throw ValidationError("equilibrium: need finite beta and H in (0,1)");
      }
      return {{H * (1.0 - beta / (1.0 - H)), beta, H}};
    case EquilibriumUnknown::beta:
      if (!finite(alpha) || !(H > 0.0 && H < 1.0)) {
        throw ValidationError("equilibrium: need finite alpha and H in (0,1)");
      }
      return {{alpha, (1.0 - H) * (1.0 - alpha / H), H}};
    case EquilibriumUnknown::H: {
      if (!finite(alpha) || !finite(beta)) {
        throw ValidationError("equilibrium: need finite alpha and beta");
      }
      // α(1−H) + βH = H(1−H)  ⇔  H² + (β−α−1)H + α = 0.
      const double b = beta - alpha - 1.0;
      const double disc = b * b - 4.0 * alpha;
      std::vector<EquilibriumTriple> out;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        // Stable pair of roots: q = −(b + sign(b)√disc)/2, H = q and α/q.
        const double q = -0.5 * (b + std::copysign(sq, b));
        std::vector<double> roots;
        if (q != 0.0) {
          roots = {q, alpha / q};
        } else {
          roots = {0.0};
        }
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        for (double h : roots) {
          if (h > 0.0 && h < 1.0) out.push_back({alpha, beta, h});
        }
      }
      if (out.empty()) {
        throw ValidationError("equilibrium: no interface height in (0,1)");
      }
      return out;
    }
  }
  throw ValidationError("equilibrium: unknown selector");
}

}  // namespace evapfront
