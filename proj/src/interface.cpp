#include "evapfront/interface.hpp"

#include <algorithm>
#include <cmath>

#include "evapfront/errors.hpp"

namespace evapfront {

InterfaceTraces interface_traces(const FieldState& f, const DiffeoMap& d,
                                 const Grid& g) {
  const std::size_t np = g.points();
  const std::size_t n = static_cast<std::size_t>(g.n_lower);
  const double cl = 1.0 / (2.0 * g.h_lower());
  const double cu = 1.0 / (2.0 * g.h_upper());

  InterfaceTraces t;
  t.pressure_z.resize(np);
  t.humidity_z.resize(np);
  t.grad2.assign(np, 0.0);
  for (std::size_t p = 0; p < np; ++p) {
    t.pressure_z[p] = cl * (3.0 * f.pressure(n, p) - 4.0 * f.pressure(n - 1, p) +
                            f.pressure(n - 2, p));
    t.humidity_z[p] = cu * (-3.0 * f.humidity(0, p) + 4.0 * f.humidity(1, p) -
                            f.humidity(2, p));
    for (const auto& gs : d.grad_prime_sigma) t.grad2[p] += gs[p] * gs[p];
  }
  return t;
}

std::vector<double> interface_normal_flux(const FieldState& f,
                                          const DiffeoMap& d, const Params& prm,
                                          const Grid& g) {
  const InterfaceTraces t = interface_traces(f, d, g);
  std::vector<double> flux(t.grad2.size());
  for (std::size_t p = 0; p < flux.size(); ++p) {
    const double jm = 1.0 + d.d_sigma_dz_minus[p];
    const double jp = 1.0 + d.d_sigma_dz_plus[p];
    if (!(jm > 0.0) || !(jp > 0.0)) {
      throw DegenerateMapError("interface flux: 1 + sigma_z vanishes on Γ");
    }
    const double bracket =
        -prm.alpha * t.pressure_z[p] / jm + prm.beta * t.humidity_z[p] / jp;
    flux[p] = ((1.0 + t.grad2[p]) * bracket + 1.0) / prm.mu;
  }
  return flux;
}

WellposednessReport check_wellposedness(const FieldState& f,
                                        const DiffeoMap& d, const Params& prm,
                                        const Grid& g) {
  const InterfaceTraces t = interface_traces(f, d, g);
  const double sign_mu = prm.mu > 0.0 ? 1.0 : -1.0;
  const double a = prm.alpha / prm.mu;
  const double b = prm.beta / prm.mu;

  WellposednessReport r;
  r.omega0 = prm.omega0;
  const std::size_t np = t.grad2.size();
  r.margin.resize(np);
  r.omega1.resize(np);
  for (std::size_t p = 0; p < np; ++p) {
    const double jm = 1.0 + d.d_sigma_dz_minus[p];
    const double jp = 1.0 + d.d_sigma_dz_plus[p];
    // On Γ both fields are constant along the interface, so the physical
    // normal derivative reduces to sqrt(1+|∇η|^2) u_z/(1+σ_z).
    const double stretch = std::sqrt(1.0 + t.grad2[p]);
    r.margin[p] = sign_mu * stretch *
                  (prm.beta * t.humidity_z[p] / jp +
                   prm.alpha * t.pressure_z[p] / jm);
    r.omega1[p] = (1.0 + t.grad2[p]) * (-b * t.humidity_z[p] / (jp * jp) -
                                        a * t.pressure_z[p] / (jm * jm));
  }
  r.worst = *std::max_element(r.margin.begin(), r.margin.end());
  r.omega1_min = *std::min_element(r.omega1.begin(), r.omega1.end());
  r.satisfied = r.worst <= -prm.omega0;
  return r;
}

InterfaceState heun_predict(const InterfaceState& eta,
                            std::span<const double> flux, double dt) {
  if (!(dt > 0.0)) throw ValidationError("interface step needs dt > 0");
  InterfaceState out;
  out.time = eta.time + dt;
  out.eta.resize(eta.eta.size());
  for (std::size_t p = 0; p < eta.eta.size(); ++p) {
    out.eta[p] = eta.eta[p] + dt * flux[p];
  }
  return out;
}

InterfaceState heun_correct(const InterfaceState& eta,
                            std::span<const double> flux,
                            std::span<const double> flux_predicted, double dt) {
  if (!(dt > 0.0)) throw ValidationError("interface step needs dt > 0");
  InterfaceState out;
  out.time = eta.time + dt;
  out.eta.resize(eta.eta.size());
  for (std::size_t p = 0; p < eta.eta.size(); ++p) {
    out.eta[p] = eta.eta[p] + 0.5 * dt * (flux[p] + flux_predicted[p]);
  }
  return out;
}

InterfaceState step_interface(const InterfaceState& eta,
                              const FluxFunction& flux, double dt,
                              const MarginSpec& margin) {
  const std::vector<double> f0 = flux(eta);
  const InterfaceState predicted = heun_predict(eta, f0, dt);
  check_margin(predicted, margin.H, margin.gamma_margin);
  const std::vector<double> f1 = flux(predicted);
  InterfaceState next = heun_correct(eta, f0, f1, dt);
  check_margin(next, margin.H, margin.gamma_margin);
  return next;
}

}  // namespace evapfront
