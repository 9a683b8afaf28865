#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "evapfront/errors.hpp"
#include "evapfront/fields.hpp"
#include "evapfront/interface.hpp"

using namespace evapfront;

namespace {

struct Flat {
  Grid grid;
  Discretization disc;
  DiffeoMap map;
  FieldState fields;
  explicit Flat(double H, int n = 16)
      : grid(build_grid(8, n, n, H)),
        disc(grid, TransverseScheme::spectral),
        map(build_diffeomorphism({std::vector<double>(8, 0.0), 0.0}, disc)),
        fields{solve_pressure(map, disc).pressure, steady_humidity_profile(grid),
               0.0} {}
};

Params make(double alpha, double beta, double H, double mu = 1.0) {
  Params p;
  p.alpha = alpha;
  p.beta = beta;
  p.H = H;
  p.mu = mu;
  return p;
}

}  // namespace

TEST(Flux, FlatEquilibriumIsZero) {
  const Flat f(0.5);
  for (double v : interface_normal_flux(f.fields, f.map, make(0.1, 0.4, 0.5), f.grid)) {
    EXPECT_NEAR(v, 0.0, 1e-12);
  }
}

TEST(Flux, NoCouplingGivesGravityDrift) {
  const Flat f(0.5);
  for (double mu : {1.0, 0.5, -2.0}) {
    for (double v : interface_normal_flux(f.fields, f.map, make(0.0, 0.0, 0.5, mu), f.grid)) {
      EXPECT_DOUBLE_EQ(v, 1.0 / mu);
    }
  }
}

TEST(Flux, FlatNonEquilibrium) {
  const Flat f(0.5);
  for (double mu : {1.0, 0.8}) {
    for (double v :
         interface_normal_flux(f.fields, f.map, make(0.25, 0.5, 0.5, mu), f.grid)) {
      EXPECT_NEAR(v, -0.5 / mu, 1e-12);
    }
  }
}

TEST(Heun, ZeroFluxKeepsInterface) {
  const InterfaceState s{{0.01, -0.02, 0.0}, 0.0};
  const InterfaceState out = step_interface(
      s, [](const InterfaceState& e) { return std::vector<double>(e.eta.size(), 0.0); },
      0.01, {0.5, 0.05});
  EXPECT_EQ(out.eta, s.eta);
  EXPECT_DOUBLE_EQ(out.time, 0.01);
}

TEST(Heun, ConstantFluxIsExact) {
  const InterfaceState s{{0.01, -0.02, 0.0}, 0.0};
  const double c = 0.3, dt = 0.05;
  const InterfaceState out = step_interface(
      s, [c](const InterfaceState& e) { return std::vector<double>(e.eta.size(), c); },
      dt, {0.5, 0.05});
  for (std::size_t i = 0; i < s.eta.size(); ++i) {
    EXPECT_DOUBLE_EQ(out.eta[i], s.eta[i] + c * dt);
  }
}

TEST(Heun, SecondOrderOnLinearDecay) {
  // η' = −η: one Heun step gives η(1 − dt + dt²/2).
  const InterfaceState s{{0.1}, 0.0};
  const double dt = 0.1;
  const InterfaceState out = step_interface(
      s, [](const InterfaceState& e) { return std::vector<double>{-e.eta[0]}; }, dt,
      {0.5, 0.05});
  EXPECT_NEAR(out.eta[0], 0.1 * (1 - dt + dt * dt / 2), 1e-15);
}

TEST(Heun, LeavingTheBandHalts) {
  const InterfaceState s{{0.4}, 0.0};
  EXPECT_THROW(step_interface(
                   s, [](const InterfaceState&) { return std::vector<double>{1.0}; },
                   0.1, {0.5, 0.05}),
               HaltError);
  EXPECT_THROW(heun_predict(s, std::vector<double>{1.0}, 0.0), ValidationError);
}

TEST(Wellposedness, FlatMarginMatchesClosedForm) {
  for (double H : {0.25, 0.5, 0.75}) {
    const Flat f(H);
    for (auto [a, b] : {std::pair{0.1, 0.4}, {0.4, 0.1}, {0.3, 0.2}}) {
      const WellposednessReport r = check_wellposedness(f.fields, f.map, make(a, b, H), f.grid);
      const double expected = a / H - b / (1 - H);
      for (double m : r.margin) EXPECT_NEAR(m, expected, 1e-10);
      EXPECT_EQ(r.worst, *std::max_element(r.margin.begin(), r.margin.end()));
      EXPECT_EQ(r.satisfied, r.worst <= -1e-3);
    }
  }
}

TEST(Wellposedness, Examples) {
  const Flat f(0.5);
  const auto good = check_wellposedness(f.fields, f.map, make(0.1, 0.4, 0.5), f.grid);
  EXPECT_NEAR(good.worst, -0.6, 1e-12);
  EXPECT_TRUE(good.satisfied);
  EXPECT_NEAR(good.omega1_min, 0.6, 1e-12);
  const auto bad = check_wellposedness(f.fields, f.map, make(0.4, 0.1, 0.5), f.grid);
  EXPECT_NEAR(bad.worst, 0.6, 1e-12);
  EXPECT_FALSE(bad.satisfied);
  const auto none = check_wellposedness(f.fields, f.map, make(0.0, 0.0, 0.5), f.grid);
  EXPECT_EQ(none.worst, 0.0);
  EXPECT_FALSE(none.satisfied);
}

TEST(Wellposedness, NegativeMobilityFlipsTheSign) {
  const Flat f(0.5);
  const auto r = check_wellposedness(f.fields, f.map, make(0.4, 0.1, 0.5, -1.0), f.grid);
  EXPECT_NEAR(r.worst, -0.6, 1e-12);
  EXPECT_TRUE(r.satisfied);
}

// Equilibria stay put: 200 Heun steps with solver-computed fluxes.
TEST(Equilibrium, FlatStateIsPreserved) {
  for (auto [H, a, b] : {std::tuple{0.5, 0.1, 0.4}, {0.25, 0.125, 0.375},
                         {0.75, 0.375, 0.125}}) {
    const Flat f(H);
    const Params p = make(a, b, H);
    InterfaceState s{std::vector<double>(8, 0.0), 0.0};
    auto flux = [&](const InterfaceState& e) {
      const DiffeoMap m = build_diffeomorphism(e, f.disc);
      const FieldState st{solve_pressure(m, f.disc).pressure, f.fields.humidity, 0.0};
      return interface_normal_flux(st, m, p, f.grid);
    };
    for (int i = 0; i < 200; ++i) s = step_interface(s, flux, 0.01, {H, 0.05});
    for (double e : s.eta) EXPECT_LT(std::abs(e), 1e-12);
  }
}
