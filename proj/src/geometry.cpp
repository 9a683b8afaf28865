#include "evapfront/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evapfront/errors.hpp"

namespace evapfront {

Discretization::Discretization(Grid grid, TransverseScheme scheme)
    : grid_(std::move(grid)), ops_(grid_, scheme) {}

bool within_margin(const InterfaceState& state, double H, double gamma_margin) {
  const double lo = gamma_margin - H;
  const double hi = 1.0 - gamma_margin - H;
  for (double e : state.eta) {
    if (!(e > lo && e < hi)) return false;
  }
  return true;
}

void check_margin(const InterfaceState& state, double H, double gamma_margin) {
  const double lo = gamma_margin - H;
  const double hi = 1.0 - gamma_margin - H;
  for (std::size_t i = 0; i < state.eta.size(); ++i) {
    const double e = state.eta[i];
    if (!(e > lo && e < hi)) {
      std::ostringstream msg;
      msg << "interface left the admissible band (" << lo << ", " << hi
          << ") at node " << i << ": eta = " << e << ", t = " << state.time;
      throw HaltError(msg.str());
    }
  }
}

std::vector<double> metric_coefficients(std::span<const double> grad_prime,
                                        double d_sigma_dz) {
  const double jac = 1.0 + d_sigma_dz;
  if (!(jac > 0.0)) {
    throw DegenerateMapError("metric coefficients undefined: 1 + sigma_z = " +
                             std::to_string(jac));
  }
  std::vector<double> a(grad_prime.size() + 1);
  double g2 = 0.0;
  for (std::size_t i = 0; i < grad_prime.size(); ++i) {
    a[i] = 2.0 * grad_prime[i] / jac;
    g2 += grad_prime[i] * grad_prime[i];
  }
  a.back() = -(1.0 + g2) / (jac * jac);
  return a;
}

LayerField vertical_derivative(const LayerField& u, double h) {
  const std::size_t levels = u.levels();
  const std::size_t np = u.points();
  LayerField out(levels, np);
  const double c = 1.0 / (2.0 * h);
  for (std::size_t p = 0; p < np; ++p) {
    out(0, p) = c * (-3.0 * u(0, p) + 4.0 * u(1, p) - u(2, p));
    for (std::size_t j = 1; j + 1 < levels; ++j) {
      out(j, p) = c * (u(j + 1, p) - u(j - 1, p));
    }
    const std::size_t n = levels - 1;
    out(n, p) = c * (3.0 * u(n, p) - 4.0 * u(n - 1, p) + u(n - 2, p));
  }
  return out;
}

namespace {

// σ(z, x') = s(z) η(x') when a profile is given; then every transverse
// derivative is the vertical profile times one derivative of η.
struct Separable {
  std::vector<double> profile;
  std::span<const double> eta;
};

SubdomainMetric derive_metric(LayerField sigma, double h,
                              const TransverseOps& ops, double delta_j,
                              const char* phase,
                              const Separable* separable = nullptr) {
  SubdomainMetric m;
  m.h = h;
  const std::size_t levels = sigma.levels();
  const std::size_t np = sigma.points();
  const int dims = ops.dims();

  m.sigma_z = vertical_derivative(sigma, h);
  m.sigma_zz = LayerField(levels, np);
  const double inv_h2 = 1.0 / (h * h);
  for (std::size_t j = 1; j + 1 < levels; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      m.sigma_zz(j, p) =
          inv_h2 * (sigma(j + 1, p) - 2.0 * sigma(j, p) + sigma(j - 1, p));
    }
  }

  m.grad_sigma.resize(dims);
  m.grad_sigma_z.resize(dims);
  if (separable) {
    LayerField prof(levels, 1);
    for (std::size_t j = 0; j < levels; ++j) prof(j, 0) = separable->profile[j];
    const LayerField prof_z = vertical_derivative(prof, h);
    std::vector<double> d(np);
    auto spread = [&](const LayerField& weight, LayerField& out) {
      out = LayerField(levels, np);
      for (std::size_t j = 0; j < levels; ++j) {
        for (std::size_t p = 0; p < np; ++p) out(j, p) = weight(j, 0) * d[p];
      }
    };
    for (int a = 0; a < dims; ++a) {
      ops.derivative(separable->eta, a, d);
      spread(prof, m.grad_sigma[a]);
      spread(prof_z, m.grad_sigma_z[a]);
    }
    ops.laplacian(separable->eta, d);
    spread(prof, m.lap_sigma);
  } else {
    for (int a = 0; a < dims; ++a) {
      ops.derivative(sigma, a, m.grad_sigma[a]);
      ops.derivative(m.sigma_z, a, m.grad_sigma_z[a]);
    }
    ops.laplacian(sigma, m.lap_sigma);
  }

  m.jacobian = LayerField(levels, np);
  for (std::size_t j = 0; j < levels; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      const double jac = 1.0 + m.sigma_z(j, p);
      if (!(jac >= delta_j)) {
        std::ostringstream msg;
        msg << "degenerate map in " << phase << " phase: 1 + sigma_z = " << jac
            << " < delta_J = " << delta_j << " at level " << j << ", node "
            << p;
        throw DegenerateMapError(msg.str());
      }
      m.jacobian(j, p) = jac;
    }
  }

  m.metric_a.assign(dims + 1, LayerField(levels, np));
  m.a_sigma = LayerField(levels, np);
  std::vector<double> g(dims);
  for (std::size_t j = 0; j < levels; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      for (int a = 0; a < dims; ++a) g[a] = m.grad_sigma[a](j, p);
      const auto coeff = metric_coefficients(g, m.sigma_z(j, p));
      for (int a = 0; a <= dims; ++a) m.metric_a[a](j, p) = coeff[a];
    }
  }
  for (std::size_t j = 1; j + 1 < levels; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      double v = m.lap_sigma(j, p) - m.metric_a[dims](j, p) * m.sigma_zz(j, p);
      for (int a = 0; a < dims; ++a) {
        v -= m.metric_a[a](j, p) * m.grad_sigma_z[a](j, p);
      }
      m.a_sigma(j, p) = v;
    }
  }
  m.sigma = std::move(sigma);
  return m;
}

}  // namespace

namespace {

DiffeoMap assemble_map(LayerField sigma_lower, LayerField sigma_upper,
                       const Discretization& disc, const GeometryOptions& options,
                       const Separable* sep_lower, const Separable* sep_upper) {
  const Grid& g = disc.grid();
  const std::size_t np = g.points();
  if (sigma_lower.levels() != static_cast<std::size_t>(g.n_lower + 1) ||
      sigma_upper.levels() != static_cast<std::size_t>(g.n_upper + 1) ||
      sigma_lower.points() != np || sigma_upper.points() != np) {
    throw ValidationError("sigma fields do not match the grid");
  }

  DiffeoMap map;
  map.eta.assign(sigma_lower.level(g.n_lower).begin(),
                 sigma_lower.level(g.n_lower).end());
  map.lower = derive_metric(std::move(sigma_lower), g.h_lower(), disc.ops(),
                            options.delta_j, "lower", sep_lower);
  map.upper = derive_metric(std::move(sigma_upper), g.h_upper(), disc.ops(),
                            options.delta_j, "upper", sep_upper);

  const auto top = static_cast<std::size_t>(g.n_lower);
  map.d_sigma_dz_minus.assign(map.lower.sigma_z.level(top).begin(),
                              map.lower.sigma_z.level(top).end());
  map.d_sigma_dz_plus.assign(map.upper.sigma_z.level(0).begin(),
                             map.upper.sigma_z.level(0).end());
  map.grad_prime_sigma.resize(g.transverse_dims);
  for (int a = 0; a < g.transverse_dims; ++a) {
    const auto row = map.lower.grad_sigma[a].level(top);
    map.grad_prime_sigma[a].assign(row.begin(), row.end());
  }
  map.min_jacobian = std::min(map.lower.jacobian.min(), map.upper.jacobian.min());
  return map;
}

}  // namespace

DiffeoMap diffeomorphism_from_sigma(LayerField sigma_lower,
                                    LayerField sigma_upper,
                                    const Discretization& disc,
                                    const GeometryOptions& options) {
  return assemble_map(std::move(sigma_lower), std::move(sigma_upper), disc,
                      options, nullptr, nullptr);
}

DiffeoMap build_diffeomorphism(const InterfaceState& eta,
                               const Discretization& disc,
                               const GeometryOptions& options) {
  const Grid& g = disc.grid();
  const std::size_t np = g.points();
  if (eta.eta.size() != np) {
    throw ValidationError("interface has " + std::to_string(eta.eta.size()) +
                          " nodes, grid has " + std::to_string(np));
  }

  Separable sl{std::vector<double>(g.n_lower + 1, 0.0), eta.eta};
  Separable su{std::vector<double>(g.n_upper + 1, 0.0), eta.eta};
  LayerField lower(g.n_lower + 1, np);
  for (int j = 1; j < g.n_lower; ++j) {
    const double s = g.z_lower[j] / g.H;
    sl.profile[j] = s;
    for (std::size_t p = 0; p < np; ++p) lower(j, p) = eta.eta[p] * s;
  }
  LayerField upper(g.n_upper + 1, np);
  for (int j = 1; j < g.n_upper; ++j) {
    const double s = (1.0 - g.z_upper[j]) / (1.0 - g.H);
    su.profile[j] = s;
    for (std::size_t p = 0; p < np; ++p) upper(j, p) = eta.eta[p] * s;
  }
  sl.profile[g.n_lower] = 1.0;
  su.profile[0] = 1.0;
  // Trace rows are copied, not computed, so they match η bit for bit.
  for (std::size_t p = 0; p < np; ++p) {
    lower(g.n_lower, p) = eta.eta[p];
    upper(0, p) = eta.eta[p];
  }
  return assemble_map(std::move(lower), std::move(upper), disc, options, &sl,
                      &su);
}

}  // namespace evapfront
