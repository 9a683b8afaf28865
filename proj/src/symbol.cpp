#include "evapfront/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "evapfront/errors.hpp"

namespace evapfront {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Complex dot(std::span<const double> c, std::span<const Complex> z) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * z[i];
  return s;
}

void check_dims(const SymbolParams& p, std::size_t n) {
  if (p.c.size() != n) {
    throw ValidationError("symbol: c and z have different lengths");
  }
}

std::string describe(const ScanSample& s) {
  std::ostringstream out;
  out.precision(17);
  out << s.reason << " at lambda=" << s.lambda << " z=(";
  for (std::size_t i = 0; i < s.z.size(); ++i) {
    out << (i ? "," : "") << s.z[i];
  }
  out << ") gamma=" << s.gamma_h << " value=" << s.value;
  return out.str();
}

}  // namespace

SymbolParams make_symbol_params(double alpha, double beta,
                                std::vector<double> c) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw ValidationError("symbol: coefficients must be finite");
  }
  for (double x : c) {
    if (!std::isfinite(x)) throw ValidationError("symbol: c must be finite");
  }
  SymbolParams p;
  p.alpha_s = alpha;
  p.beta_s = beta;
  p.c = std::move(c);
  p.constraint_sum = alpha + beta;
  return p;
}

Complex principal_sqrt(Complex w) {
  if (w.imag() == 0.0 && w.real() < 0.0) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "principal sqrt: argument " << w.real() << " lies on the branch cut";
    throw BranchCutError(msg.str());
  }
  if (w.imag() == 0.0) return {std::sqrt(w.real()), 0.0};
  return std::sqrt(w);
}

Complex minus_norm(std::span<const Complex> z) {
  Complex s = 0.0;
  for (const Complex& zk : z) s -= zk * zk;
  return principal_sqrt(s);
}

Complex eval_symbol(const SymbolParams& p, Complex lambda,
                    std::span<const Complex> z) {
  check_dims(p, z.size());
  const Complex zm = minus_norm(z);
  Complex value = lambda + p.alpha_s * zm - dot(p.c, z);
  if (p.beta_s != 0.0) value += p.beta_s * principal_sqrt(lambda + zm * zm);
  return value;
}

Complex principal_part(const SymbolParams& p, double gamma_h, Complex lambda,
                       std::span<const Complex> z) {
  if (!(gamma_h > 0.0)) {
    throw ValidationError("principal_part: gamma must be positive");
  }
  if (gamma_h > 1.0) return lambda;
  check_dims(p, z.size());
  const Complex lower = p.constraint_sum * minus_norm(z) - dot(p.c, z);
  return gamma_h == 1.0 ? lambda + lower : lower;
}

std::vector<Vertex> convex_hull(std::vector<Vertex> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const Vertex& o, const Vertex& a, const Vertex& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };
  std::vector<Vertex> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Vertex& v : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], v) <= 0.0) --k;
    hull[k++] = v;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

NewtonPolygon newton_polygon(const SymbolParams& p) {
  std::vector<Vertex> exps{{0.0, 0.0}, {0.0, 1.0}};
  const bool has_z = p.alpha_s != 0.0 || p.beta_s != 0.0 ||
                     std::any_of(p.c.begin(), p.c.end(),
                                 [](double x) { return x != 0.0; });
  if (has_z) exps.push_back({1.0, 0.0});
  if (p.beta_s != 0.0) exps.push_back({0.0, 0.5});
  NewtonPolygon poly;
  poly.vertices = convex_hull(std::move(exps));
  const std::vector<Vertex> triangle{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  poly.degenerate = poly.vertices != triangle;
  return poly;
}

double largest_sector_delta(const SymbolParams& p, double tol) {
  const double s = p.constraint_sum;
  if (!(s > 0.0)) return 0.0;
  const double cn = norm2(p.c);
  auto bound = [&](double d) {
    return s * std::sqrt(std::cos(2.0 * d)) * std::cos(d) - cn * std::sin(d);
  };
  double lo = 0.0;
  double hi = kPi / 4.0;
  if (bound(hi) > 0.0) return hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (bound(mid) > 0.0 ? lo : hi) = mid;
  }
  return lo;
}

ScanReport n_parabolicity_scan(const SymbolParams& p, const SectorSpec& spec,
                               double eta_sector) {
  const std::size_t dims = p.c.size();
  if (dims != 1 && dims != 2) {
    throw ValidationError("symbol scan: one or two transverse dimensions");
  }
  if (!(eta_sector > 0.0 && eta_sector < kPi / 2.0)) {
    throw ValidationError("symbol scan: eta_sector must lie in (0, pi/2)");
  }
  const double kappa = spec.kappa.value_or(kPi / 2.0 + eta_sector);
  if (!(kappa > 0.0 && kappa < kPi)) {
    throw ValidationError("symbol scan: kappa must lie in (0, pi)");
  }
  const double delta = spec.delta_s;
  if (!(delta > 0.0 && delta < kPi / 2.0)) {
    throw ValidationError("symbol scan: delta must lie in (0, pi/2)");
  }
  if (spec.n_samples_radial < 2 || spec.n_samples_angular < 1 ||
      !(spec.radius_min > 0.0) || !(spec.radius_max > spec.radius_min)) {
    throw ValidationError("symbol scan: bad sample counts or radii");
  }

  // Unit-norm samples of Σ_δ^{n−1}; each component sits at angle π/2 + ψ
  // (or its negative) with |ψ| < δ.
  auto open_grid = [](double half, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) v[j] = -half + 2.0 * half * (j + 0.5) / n;
    return v;
  };
  std::vector<std::vector<Complex>> zs;
  if (dims == 1) {
    for (double psi : open_grid(delta, spec.n_samples_angular)) {
      const Complex e = std::polar(1.0, kPi / 2.0 + psi);
      zs.push_back({e});
      zs.push_back({-e});
    }
  } else {
    const int m = std::max(4, spec.n_samples_angular / 8);
    const auto psis = open_grid(delta, m);
    for (double chi : open_grid(kPi / 4.0, 8)) {
      const double c0 = std::cos(chi + kPi / 4.0);
      const double c1 = std::sin(chi + kPi / 4.0);
      for (double p0 : psis) {
        for (double p1 : psis) {
          for (int sg = 0; sg < 4; ++sg) {
            const double s0 = (sg & 1) ? -1.0 : 1.0;
            const double s1 = (sg & 2) ? -1.0 : 1.0;
            zs.push_back({s0 * std::polar(c0, kPi / 2.0 + p0),
                          s1 * std::polar(c1, kPi / 2.0 + p1)});
          }
        }
      }
    }
  }
  std::vector<Complex> lambdas;
  const double lr0 = std::log(spec.radius_min);
  const double lr1 = std::log(spec.radius_max);
  for (int i = 0; i < spec.n_samples_radial; ++i) {
    const double r =
        std::exp(lr0 + (lr1 - lr0) * i / (spec.n_samples_radial - 1));
    for (double th : open_grid(kappa, spec.n_samples_angular)) {
      lambdas.push_back(std::polar(r, th));
    }
  }

  ScanReport rep;
  rep.arg_limit = kPi / 2.0 - eta_sector;
  rep.minus_norm_bound = std::sqrt(std::cos(2.0 * delta)) * std::cos(delta);
  const double s = p.constraint_sum;
  if (s > 0.0) {
    rep.combined_bound = s * rep.minus_norm_bound - norm2(p.c) * std::sin(delta);
  }
  rep.largest_delta = largest_sector_delta(p);
  const double inf = std::numeric_limits<double>::infinity();
  rep.min_abs_half = inf;
  rep.min_abs_one = inf;
  rep.min_abs_top = inf;
  rep.min_re_minus_norm = inf;
  double min_re_half = inf;
  constexpr double kSlack = 1e-12;

  auto violate = [&](Complex lambda, const std::vector<Complex>& z, double g,
                     Complex v, const char* why) {
    if (!rep.first_violation) {
      rep.first_violation = ScanSample{lambda, z, g, v, why};
    }
  };

  for (const auto& z : zs) {
    const Complex zm = minus_norm(z);
    rep.min_re_minus_norm = std::min(rep.min_re_minus_norm, zm.real());
    if (zm.real() < rep.minus_norm_bound - kSlack) {
      rep.bounds_hold = false;
      violate(0.0, z, 0.5, zm, "Re|z|- below its lower bound");
    }
    const Complex half = principal_part(p, 0.5, 0.0, z);
    ++rep.samples;
    min_re_half = std::min(min_re_half, half.real());
    if (rep.combined_bound && half.real() < *rep.combined_bound - kSlack) {
      rep.bounds_hold = false;
      violate(0.0, z, 0.5, half, "Re pi_{1/2}P below its lower bound");
    }
    const double mag = std::abs(half);
    rep.min_abs_half = std::min(rep.min_abs_half, mag);
    const double arg = mag > 0.0 ? std::abs(std::arg(half)) : kPi;
    rep.max_arg_half = std::max(rep.max_arg_half, arg);
    if (mag == 0.0) violate(0.0, z, 0.5, half, "pi_{1/2}P vanishes");
    if (!(arg < rep.arg_limit)) {
      violate(0.0, z, 0.5, half, "pi_{1/2}P leaves the sector S_{pi/2-eta}");
    }
    for (const Complex& lambda : lambdas) {
      const Complex one = lambda + half;
      ++rep.samples;
      const double scaled = std::abs(one) / (std::abs(lambda) + 1.0);
      rep.min_abs_one = std::min(rep.min_abs_one, scaled);
      if (scaled <= kSlack) violate(lambda, z, 1.0, one, "pi_1P vanishes");
    }
  }
  for (const Complex& lambda : lambdas) {
    const Complex top = principal_part(p, 2.0, lambda, zs.front());
    ++rep.samples;
    rep.min_abs_top = std::min(rep.min_abs_top, std::abs(top) / std::abs(lambda));
  }
  rep.min_re_half = min_re_half;
  rep.pass = !rep.first_violation.has_value();
  return rep;
}

std::string describe_sample(const ScanSample& s) { return describe(s); }


namespace {

double kmag(std::span<const double> k) {
  const double m = norm2(k);
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw ValidationError("dispersion: wavenumber must be finite and nonzero");
  }
  return m;
}

double ck(const SymbolParams& p, std::span<const double> k) {
  if (p.c.size() != k.size()) {
    throw ValidationError("dispersion: c and k have different lengths");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) s += p.c[i] * k[i];
  return s;
}

// Damped Newton shared by both relations. `f` returns (value, derivative)
// and may throw BranchCutError; one restart from `reflect(λ)` is allowed.
template <class F, class R>
DispersionRoot newton(F f, R reflect, Complex start, const RootOptions& opt,
                      std::span<const double> k) {
  DispersionRoot out;
  out.k.assign(k.begin(), k.end());
  bool restarted = false;
  Complex lambda = start;
  std::pair<Complex, Complex> fv;
  for (;;) {
    try {
      fv = f(lambda);
      break;
    } catch (const BranchCutError&) {
      if (restarted) throw;
      restarted = true;
      lambda = reflect(lambda);
    }
  }
  int it = 0;
  while (std::abs(fv.first) >= opt.tol) {
    if (++it > opt.max_iter) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "dispersion: Newton did not converge, last lambda=" << lambda
          << " residual=" << std::abs(fv.first);
      throw NumericalError(msg.str());
    }
    const Complex step = fv.first / fv.second;
    const double r0 = std::abs(fv.first);
    Complex trial = lambda - step;
    std::pair<Complex, Complex> ft;
    bool accepted = false;
    for (double damp = 1.0; damp > 1e-8; damp *= 0.5) {
      trial = lambda - damp * step;
      try {
        ft = f(trial);
      } catch (const BranchCutError&) {
        continue;
      }
      if (std::abs(ft.first) <= r0 || damp < 2e-8) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (restarted) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "dispersion: iteration stalled at the branch cut, last lambda="
            << lambda;
        throw BranchCutError(msg.str());
      }
      restarted = true;
      lambda = reflect(lambda);
      fv = f(lambda);
      continue;
    }
    lambda = trial;
    fv = ft;
  }
  out.lambda = lambda;
  out.residual = std::abs(fv.first);
  out.iterations = it;
  out.branch_note = restarted
                        ? "principal branch; restarted from reflected guess"
                        : "principal branch";
  return out;
}

// s coth(sL) as a function of w = s²; even in s, so any square root works.
std::pair<Complex, Complex> layer_dtn(Complex w, double L) {
  const Complex x = w * (L * L);
  if (std::abs(x) < 1e-3) {
    const Complex v =
        (1.0 + x / 3.0 - x * x / 45.0 + 2.0 * x * x * x / 945.0 -
         x * x * x * x / 4725.0) /
        L;
    const Complex d =
        L * (1.0 / 3.0 - 2.0 * x / 45.0 + 6.0 * x * x / 945.0 -
             4.0 * x * x * x / 4725.0);
    return {v, d};
  }
  const Complex s = (w.imag() == 0.0 && w.real() < 0.0)
                        ? Complex(0.0, std::sqrt(-w.real()))
                        : std::sqrt(w);
  const Complex sl = s * L;
  const Complex coth = 1.0 / std::tanh(sl);
  const Complex sh = std::sinh(sl);
  const Complex csch2 = std::isfinite(std::abs(sh)) ? 1.0 / (sh * sh) : 0.0;
  return {s * coth, (coth - sl * csch2) / (2.0 * s)};
}

}  // namespace

DispersionRoot dispersion_root(const SymbolParams& p, std::span<const double> k,
                               std::optional<Complex> lambda0,
                               const RootOptions& options) {
  const double km = kmag(k);
  const double k2 = km * km;
  const Complex shift = p.alpha_s * km - kI * ck(p, k);
  if (p.beta_s == 0.0) {
    DispersionRoot out;
    out.k.assign(k.begin(), k.end());
    out.lambda = -shift;
    out.residual = std::abs(out.lambda + shift);
    out.branch_note = "explicit root (beta = 0)";
    return out;
  }
  auto f = [&](Complex lambda) {
    const Complex s = principal_sqrt(lambda + k2);
    const Complex value = lambda + shift + p.beta_s * s;
    if (s == 0.0) {
      // A root may sit exactly on the branch point; anything else there
      // has no usable derivative.
      if (std::abs(value) < options.tol) return std::pair{value, Complex(1.0)};
      throw BranchCutError("dispersion: branch point lambda = -|k|^2");
    }
    return std::pair<Complex, Complex>{value, 1.0 + p.beta_s / (2.0 * s)};
  };
  auto reflect = [&](Complex lambda) { return -2.0 * k2 - lambda; };
  try {
    return newton(f, reflect, lambda0.value_or(-shift), options, k);
  } catch (const NumericalError& first) {
    // Near the branch point Newton in λ can stall. In s = √(λ+|k|²) the
    // relation is the quadratic s² + βs + (shift − |k|²) = 0; its roots on
    // the principal sheet (Re s > 0, or Re s = 0 with Im s > 0) seed a
    // second Newton pass that still certifies the residual.
    const Complex q = shift - k2;
    const Complex disc = std::sqrt(Complex(p.beta_s * p.beta_s) - 4.0 * q);
    for (const Complex sr : {(-p.beta_s + disc) / 2.0, (-p.beta_s - disc) / 2.0}) {
      const bool principal =
          sr.real() > 0.0 || (sr.real() == 0.0 && sr.imag() > 0.0);
      if (!principal) continue;
      DispersionRoot r = newton(f, reflect, sr * sr - k2, options, k);
      r.branch_note = "principal branch; seeded from the quadratic in s";
      return r;
    }
    throw NumericalError(std::string(first.what()) +
                         "; no root on the principal sheet");
  }
}

Complex layered_relation(const SymbolParams& p, std::span<const double> k,
                         double H, Complex lambda) {
  const double km = kmag(k);
  const Complex base =
      lambda + p.alpha_s * km / std::tanh(km * H) - kI * ck(p, k);
  if (p.beta_s == 0.0) return base;
  return base + p.beta_s * layer_dtn(lambda + km * km, 1.0 - H).first;
}

DispersionRoot layered_dispersion_root(const SymbolParams& p,
                                       std::span<const double> k, double H,
                                       std::optional<Complex> lambda0,
                                       const RootOptions& options) {
  if (!(H > 0.0 && H < 1.0)) {
    throw ValidationError("layered dispersion: H must lie in (0, 1)");
  }
  const double km = kmag(k);
  const Complex shift = p.alpha_s * km / std::tanh(km * H) - kI * ck(p, k);
  if (p.beta_s == 0.0) {
    DispersionRoot out;
    out.k.assign(k.begin(), k.end());
    out.lambda = -shift;
    out.residual = 0.0;
    out.branch_note = "explicit root (beta = 0)";
    return out;
  }
  auto f = [&](Complex lambda) {
    const auto [v, d] = layer_dtn(lambda + km * km, 1.0 - H);
    return std::pair<Complex, Complex>{lambda + shift + p.beta_s * v,
                                       1.0 + p.beta_s * d};
  };
  auto reflect = [&](Complex lambda) { return -2.0 * km * km - lambda; };
  DispersionRoot out =
      newton(f, reflect, lambda0.value_or(-shift), options, k);
  out.branch_note = "entire in lambda (no branch)";
  return out;
}

IsotropicReduction rotate_to_isotropic(double a_minus, double a_plus,
                                       std::span<const double> zeta,
                                       const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || n < 2 || static_cast<Eigen::Index>(zeta.size()) != n - 1) {
    throw ValidationError("rotation: A must be square with one more row than zeta");
  }
  if (!A.isApprox(A.transpose(), 1e-12)) {
    throw ValidationError("rotation: A must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(A.inverse());
  if (llt.info() != Eigen::Success) {
    throw ValidationError("rotation: A must be positive definite");
  }
  IsotropicReduction r;
  r.M = llt.matrixU();
  const Eigen::Index d = n - 1;
  const double mnn = r.M(d, d);
  Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(zeta.data(), d);
  const Eigen::VectorXd c =
      r.M.topLeftCorner(d, d) * z - (a_minus + a_plus) * r.M.col(d).head(d);
  // The elliptic phase lies below the interface; reflecting it onto the
  // upper half-space flips the sign of its normal derivative.
  r.params = make_symbol_params(-mnn * a_minus, mnn * a_plus,
                                std::vector<double>(c.data(), c.data() + d));
  return r;
}

std::vector<double> rotated_wavenumber(const IsotropicReduction& r,
                                       std::span<const double> k) {
  const Eigen::Index d = r.M.rows() - 1;
  if (static_cast<Eigen::Index>(k.size()) != d) {
    throw ValidationError("rotation: wavenumber has the wrong length");
  }
  const Eigen::VectorXd kv = Eigen::Map<const Eigen::VectorXd>(k.data(), d);
  const Eigen::VectorXd kt = r.M.topLeftCorner(d, d)
                                 .transpose()
                                 .triangularView<Eigen::Lower>()
                                 .solve(kv);
  return {kt.data(), kt.data() + d};
}

}  // namespace evapfront
