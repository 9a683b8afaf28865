#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "evapfront/errors.hpp"
#include "evapfront/modelproblem.hpp"

using namespace evapfront;

namespace {

const Complex I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

Complex ramp(double t) { return t; }

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Halfspace, ZeroForcingStaysZero) {
  const std::vector<double> k{1.0};
  const ModeSolution s = solve_halfspace_mode(make_symbol_params(0.5, 0.5, {0.2}), k,
                                              [](double) { return Complex(0); }, 1.0, 0.01);
  ASSERT_EQ(s.times.size(), s.phi_hat.size());
  EXPECT_EQ(s.times.size(), 101u);
  for (const Complex& v : s.phi_hat) EXPECT_EQ(v, Complex(0.0));
}

// β = 0 decouples the boundary: φ̂' = mφ̂ + t, m = −α|k| + i c·k.
TEST(Halfspace, DecoupledBoundaryMatchesClosedForm) {
  const std::vector<double> k{2.0};
  const SymbolParams p = make_symbol_params(0.75, 0.0, {0.5});
  HalfspaceOptions opt;
  opt.check_depth = false;
  const double T = 2.0;
  const ModeSolution s = solve_halfspace_mode(p, k, ramp, T, 1e-4, opt);
  const Complex m(-1.5, 1.0);
  for (std::size_t i = 0; i < s.times.size(); i += 1000) {
    const double t = s.times[i];
    const Complex want = (std::exp(m * t) - 1.0 - m * t) / (m * m);
    EXPECT_NEAR(std::abs(s.phi_hat[i] - want), 0.0, 1e-8) << t;
  }
  EXPECT_NEAR(s.times.back(), T, 1e-12);
}

TEST(Halfspace, LinearInForcing) {
  const std::vector<double> k{1.0};
  const SymbolParams p = make_symbol_params(0.3, 0.7, {0.4});
  const ModeSolution a = solve_halfspace_mode(p, k, ramp, 1.0, 0.01);
  const ModeSolution b = solve_halfspace_mode(
      p, k, [](double t) { return Complex(0.0, -3.0) * t; }, 1.0, 0.01);
  for (std::size_t i = 0; i < a.phi_hat.size(); ++i) {
    EXPECT_LT(std::abs(b.phi_hat[i] - Complex(0.0, -3.0) * a.phi_hat[i]),
              1e-12 * (1 + std::abs(a.phi_hat[i])));
  }
}

TEST(Halfspace, ProfilesMatchBoundaryValue) {
  const std::vector<double> k{1.5};
  const ModeSolution s = solve_halfspace_mode(make_symbol_params(0.4, 0.6, {0.0}), k,
                                              ramp, 1.0, 0.01);
  ASSERT_EQ(s.depth.size(), s.phi_minus_profile.size());
  ASSERT_EQ(s.depth.size(), s.phi_plus_profile.size());
  EXPECT_EQ(s.depth.front(), 0.0);
  EXPECT_NEAR(s.depth.back(), s.truncation_depth, 1e-12);
  EXPECT_NEAR(s.truncation_depth, 8.0 / 1.5, 1e-12);
  EXPECT_LT(std::abs(s.phi_plus_profile.front() - s.phi_hat.back()), 1e-14);
  for (std::size_t i = 0; i < s.depth.size(); ++i) {
    EXPECT_LT(std::abs(s.phi_minus_profile[i] -
                       std::exp(-1.5 * s.depth[i]) * s.phi_hat.back()),
              1e-13);
  }
}

TEST(Halfspace, ShallowTruncationIsDetected) {
  const std::vector<double> k{1.0};
  HalfspaceOptions opt;
  opt.depth_factor = 0.25;
  EXPECT_THROW(solve_halfspace_mode(make_symbol_params(0.0, 1.0, {0.0}), k, ramp, 4.0,
                                    0.01, opt),
               NumericalError);
}

TEST(Halfspace, ConvergesUnderRefinement) {
  const std::vector<double> k{2.0};
  const SymbolParams p = make_symbol_params(0.5, 0.5, {0.3});
  auto g = [](double t) { return Complex(1.0 - std::exp(-t)); };
  const ModeSolution coarse = solve_halfspace_mode(p, k, g, 2.0, 0.01);
  HalfspaceOptions fine;
  fine.depth_factor = 16.0;
  const ModeSolution refined = solve_halfspace_mode(p, k, g, 2.0, 0.005, fine);
  EXPECT_LT(rel(coarse.phi_hat.back(), refined.phi_hat.back()), 5e-3);
}

// After an early pulse the boundary amplitude decays at the rate of the
// dispersion root.
TEST(Halfspace, PulseDecaysAtDispersionRate) {
  const std::vector<double> k{1.0};
  const SymbolParams p = make_symbol_params(0.0, 1.0, {0.0});
  const double tau = 0.5;
  HalfspaceOptions opt;
  opt.depth_factor = 40.0;
  opt.max_spacing = 0.05;
  const ModeSolution s = solve_halfspace_mode(
      p, k, [&](double t) { return Complex(t / (tau * tau) * std::exp(-t / tau)); },
      20.0, 1e-3, opt);
  const std::size_t mid = s.times.size() / 2;
  const double slope =
      (std::log(std::abs(s.phi_hat.back())) - std::log(std::abs(s.phi_hat[mid]))) /
      (s.times.back() - s.times[mid]);
  const double root = dispersion_root(p, k).lambda.real();
  EXPECT_NEAR(root, -(std::sqrt(5.0) - 1) / 2, 1e-12);
  EXPECT_LT(std::abs(slope - root) / std::abs(root), 0.02);
}

TEST(Halfspace, RejectsInvalidInput) {
  const std::vector<double> k{1.0};
  const auto ok = make_symbol_params(0.5, 0.5, {0.0});
  EXPECT_THROW(solve_halfspace_mode(make_symbol_params(-1.0, 0.5, {0.0}), k, ramp, 1, 0.1),
               ValidationError);
  EXPECT_THROW(solve_halfspace_mode(ok, k, ramp, 1.0, 0.0), ValidationError);
  EXPECT_THROW(solve_halfspace_mode(ok, k, ramp, 1.0, 2.0), ValidationError);
  EXPECT_THROW(solve_halfspace_mode(ok, k, [](double) { return Complex(1.0); }, 1.0, 0.1),
               ValidationError);
  const std::vector<double> zero{0.0};
  EXPECT_THROW(solve_halfspace_mode(ok, zero, ramp, 1.0, 0.1), ValidationError);
}

TEST(FlatFront, MatchesLayeredRelation) {
  Params prm;
  prm.alpha = 0.1;
  prm.beta = 0.4;
  prm.H = 0.5;
  const SymbolParams sym = make_symbol_params(-0.2, 0.8, {0.0});
  for (double k : {1.0, 2.0, 2 * kPi, 16.0}) {
    const std::vector<double> kv{k};
    const Complex want = layered_dispersion_root(sym, kv, 0.5).lambda;
    const DispersionRoot got = flat_front_growth_rate(prm, k);
    EXPECT_LT(std::abs(got.lambda - want), 1e-6 * (1 + std::abs(want))) << k;
    EXPECT_LT(got.lambda.real(), 0.0);
  }
}

TEST(FlatFront, DecoupledPhaseClosedForm) {
  Params prm;
  prm.alpha = 0.2;
  prm.beta = 0.0;
  prm.H = 0.4;
  const double k = 3.0;
  // λ = (α/H) k coth(kH).
  EXPECT_NEAR(flat_front_growth_rate(prm, k).lambda.real(),
              0.5 * k / std::tanh(k * 0.4), 1e-8);
}

TEST(FlatFront, ShortWavesSeeTheHalfspace) {
  Params prm;
  prm.alpha = 0.1;
  prm.beta = 0.4;
  prm.H = 0.5;
  const std::vector<double> kv{16.0};
  const Complex half = dispersion_root(make_symbol_params(-0.2, 0.8, {0.0}), kv).lambda;
  EXPECT_LT(rel(flat_front_growth_rate(prm, 16.0).lambda, half), 1e-2);
  EXPECT_THROW(flat_front_growth_rate(prm, 0.0), ValidationError);
}
