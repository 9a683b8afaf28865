#include "evapfront/linearize.hpp"

#include <algorithm>
#include <numeric>

#include "evapfront/errors.hpp"
#include "evapfront/interface.hpp"

namespace evapfront {

BoundaryCoeffs frozen_coefficients(const FieldState& bg, const DiffeoMap& d,
                                   const Params& prm, const Grid& g,
                                   std::span<const double> sigma_t) {
  const InterfaceTraces t = interface_traces(bg, d, g);
  const std::size_t np = t.grad2.size();
  if (!sigma_t.empty() && sigma_t.size() != np) {
    throw ValidationError("frozen_coefficients: sigma_t has the wrong size");
  }
  const double a = prm.alpha / prm.mu;
  const double b = prm.beta / prm.mu;
  const int dims = static_cast<int>(d.grad_prime_sigma.size());

  BoundaryCoeffs c;
  c.alpha_minus.resize(np);
  c.alpha_plus.resize(np);
  c.alpha_tilde_minus.resize(np);
  c.alpha_tilde_plus.resize(np);
  c.zeta.assign(dims, std::vector<double>(np));
  c.g0.resize(np);
  for (std::size_t p = 0; p < np; ++p) {
    const double jm = 1.0 + d.d_sigma_dz_minus[p];
    const double jp = 1.0 + d.d_sigma_dz_plus[p];
    if (!(jm > 0.0) || !(jp > 0.0)) {
      throw DegenerateMapError("frozen_coefficients: 1 + sigma_z vanishes on Γ");
    }
    const double w = 1.0 + t.grad2[p];
    const double um = t.pressure_z[p];
    const double up = t.humidity_z[p];
    c.alpha_minus[p] = a * um * w / (jm * jm);
    c.alpha_plus[p] = -b * up * w / (jp * jp);
    c.alpha_tilde_minus[p] = -a * w / jm;
    c.alpha_tilde_plus[p] = b * w / jp;
    const double z = 2.0 * (a * um / jm - b * up / jp);
    for (int ax = 0; ax < dims; ++ax) {
      c.zeta[ax][p] = z * d.grad_prime_sigma[ax][p];
    }
    const double st = sigma_t.empty() ? 0.0 : sigma_t[p];
    c.g0[p] = 1.0 / prm.mu - st + w * (-a * um / jm + b * up / jp);
  }
  double gap = c.alpha_plus[0] - c.alpha_minus[0];
  for (std::size_t p = 1; p < np; ++p) {
    gap = std::min(gap, c.alpha_plus[p] - c.alpha_minus[p]);
  }
  c.omega1 = gap;
  return c;
}

MeanCoeffs mean_freeze(const BoundaryCoeffs& c) {
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) /
           static_cast<double>(v.size());
  };
  MeanCoeffs m;
  m.alpha_minus = mean(c.alpha_minus);
  m.alpha_plus = mean(c.alpha_plus);
  m.alpha_tilde_minus = mean(c.alpha_tilde_minus);
  m.alpha_tilde_plus = mean(c.alpha_tilde_plus);
  for (const auto& z : c.zeta) m.zeta.push_back(mean(z));
  m.g0 = mean(c.g0);
  return m;
}

MeanCoeffs point_freeze(const BoundaryCoeffs& c, std::size_t p) {
  if (p >= c.alpha_minus.size()) {
    throw ValidationError("point_freeze: node index out of range");
  }
  MeanCoeffs m;
  m.alpha_minus = c.alpha_minus[p];
  m.alpha_plus = c.alpha_plus[p];
  m.alpha_tilde_minus = c.alpha_tilde_minus[p];
  m.alpha_tilde_plus = c.alpha_tilde_plus[p];
  for (const auto& z : c.zeta) m.zeta.push_back(z[p]);
  m.g0 = c.g0[p];
  return m;
}

SymbolParams to_symbol_params(const MeanCoeffs& f) {
  return make_symbol_params(-f.alpha_minus, f.alpha_plus, f.zeta);
}

Eigen::MatrixXd frozen_principal_matrix(std::span<const double> grad_prime,
                                        double d_sigma_dz) {
  const std::vector<double> a = metric_coefficients(grad_prime, d_sigma_dz);
  const Eigen::Index d = static_cast<Eigen::Index>(grad_prime.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(d + 1, d + 1);
  for (Eigen::Index i = 0; i < d; ++i) {
    A(i, d) = A(d, i) = -0.5 * a[i];
  }
  A(d, d) = -a[d];
  return A;
}

}  // namespace evapfront
