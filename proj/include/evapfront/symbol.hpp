#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace evapfront {

using Complex = std::complex<double>;

/// Coefficients of P(λ,z) = λ + α|z|₋ + β√(λ+|z|₋²) − c·z.
struct SymbolParams {
  double alpha_s = 0.0;
  double beta_s = 0.0;
  std::vector<double> c;        // one entry per transverse dimension
  double constraint_sum = 0.0;  // alpha_s + beta_s
};

SymbolParams make_symbol_params(double alpha, double beta,
                                std::vector<double> c);

/// √w = √|w| e^{i arg(w)/2} with arg(w) ∈ (−π, π]. Throws BranchCutError
/// when w lies on the negative real axis.
Complex principal_sqrt(Complex w);

/// |z|₋ = √(−Σ z_k²).
Complex minus_norm(std::span<const Complex> z);

Complex eval_symbol(const SymbolParams& p, Complex lambda,
                    std::span<const Complex> z);

/// π_γP; pass +infinity (or any γ > 1) for the top-order part.
Complex principal_part(const SymbolParams& p, double gamma_h, Complex lambda,
                       std::span<const Complex> z);

using Vertex = std::pair<double, double>;  // (power of |z|, power of λ)

/// Convex hull, counter-clockwise from the lowest-leftmost point;
/// collinear points are dropped.
std::vector<Vertex> convex_hull(std::vector<Vertex> points);

struct NewtonPolygon {
  std::vector<Vertex> vertices;
  bool degenerate = false;  // hull is not the triangle (0,0),(1,0),(0,1)
};

/// Hull of the exponent set of P together with the origin.
NewtonPolygon newton_polygon(const SymbolParams& p);

struct SectorSpec {
  std::optional<double> kappa;  // λ sector half-angle; default π/2 + eta_sector
  double delta_s = 0.1;         // half-angle of Σ_δ around the imaginary axis
  int n_samples_radial = 32;
  int n_samples_angular = 64;
  double radius_min = 1e-3;
  double radius_max = 1e3;
};

struct ScanSample {
  Complex lambda;
  std::vector<Complex> z;
  double gamma_h = 0.0;
  Complex value;
  std::string reason;
};

struct ScanReport {
  bool pass = false;
  long long samples = 0;
  double min_abs_half = 0.0;    // min |π_{1/2}P| over |z| = 1
  double min_abs_one = 0.0;     // min |π_1P| / (|λ| + 1)
  double min_abs_top = 0.0;     // min |π_2P| / |λ|
  double max_arg_half = 0.0;    // max |arg π_{1/2}P|
  double arg_limit = 0.0;       // π/2 − eta_sector
  double min_re_minus_norm = 0.0;
  double minus_norm_bound = 0.0;  // √cos2δ cosδ
  std::optional<double> min_re_half;
  std::optional<double> combined_bound;  // (α+β)√cos2δ cosδ − ‖c‖ sinδ
  bool bounds_hold = true;
  double largest_delta = 0.0;  // largest δ keeping combined_bound positive
  std::optional<ScanSample> first_violation;
};

/// Samples S_κ × Σ_δ^{n−1} with |z| = 1 and checks that π_γP does not
/// vanish for γ ∈ {1/2, 1, 2} and that π_{1/2}P stays in S_{π/2−η}.
ScanReport n_parabolicity_scan(const SymbolParams& p, const SectorSpec& spec,
                               double eta_sector);

/// One-line description of a scan sample for reports and errors.
std::string describe_sample(const ScanSample& sample);

/// Largest δ ∈ (0, π/4) with (α+β)√cos2δ cosδ − ‖c‖ sinδ > 0, by
/// bisection to `tol`; 0 when none exists.
double largest_sector_delta(const SymbolParams& p, double tol = 1e-3);

struct DispersionRoot {
  std::vector<double> k;
  Complex lambda;
  double residual = 0.0;
  int iterations = 0;
  std::string branch_note;
};

struct RootOptions {
  double tol = 1e-12;
  int max_iter = 50;
};

/// Root of λ ↦ P(λ, ik) by damped Newton from `lambda0`.
DispersionRoot dispersion_root(const SymbolParams& p, std::span<const double> k,
                               std::optional<Complex> lambda0 = std::nullopt,
                               const RootOptions& options = {});

/// Finite-layer analogue with the elliptic phase on a layer of depth H and
/// the parabolic phase on a layer of depth 1 − H:
/// λ + α|k|coth(|k|H) + β s coth(s(1−H)) − i c·k = 0, s = √(λ+|k|²).
DispersionRoot layered_dispersion_root(
    const SymbolParams& p, std::span<const double> k, double H,
    std::optional<Complex> lambda0 = std::nullopt,
    const RootOptions& options = {});

/// Residual of the finite-layer relation at λ.
Complex layered_relation(const SymbolParams& p, std::span<const double> k,
                         double H, Complex lambda);

/// Reduction of an anisotropic frozen problem to the isotropic symbol.
///
/// The frozen problem has constant principal matrix A (symmetric positive
/// definite, transverse axes first, normal last) in both phases and the
/// boundary law ∂_tφ − a⁻ ∂_nφ⁻ − a⁺ ∂_nφ⁺ + ζ·∇'φ = g, the elliptic
/// phase below the interface. With A⁻¹ = MᵀM, M upper triangular, the map
/// y = Mx turns both operators into Laplacians and keeps the half-spaces.
struct IsotropicReduction {
  SymbolParams params;
  Eigen::MatrixXd M;
};

IsotropicReduction rotate_to_isotropic(double a_minus, double a_plus,
                                       std::span<const double> zeta,
                                       const Eigen::MatrixXd& A);

/// Wavenumber in the rotated variables: k̃ = M'^{−T} k.
std::vector<double> rotated_wavenumber(const IsotropicReduction& r,
                                       std::span<const double> k);

}  // namespace evapfront
