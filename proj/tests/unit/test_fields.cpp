#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "evapfront/errors.hpp"
#include "evapfront/fields.hpp"
#include "evapfront/geometry.hpp"
#include "mms.hpp"

using namespace evapfront;

namespace {
constexpr double kPi = std::numbers::pi;

struct FieldCase {
  Grid grid;
  Discretization disc;
  FieldCase(int nt, int nl, int nu, double H, int dims = 1,
        TransverseScheme scheme = TransverseScheme::spectral)
      : grid(build_grid(nt, nl, nu, H, dims)), disc(grid, scheme) {}
  DiffeoMap flat() const {
    return build_diffeomorphism({std::vector<double>(grid.points(), 0.0), 0.0},
                                disc);
  }
  DiffeoMap wavy(double eps) const {
    InterfaceState s;
    for (std::size_t p = 0; p < grid.points(); ++p) {
      s.eta.push_back(eps * std::cos(2 * kPi * grid.coordinate(p, 0)));
    }
    return build_diffeomorphism(s, disc);
  }
};
}  // namespace

TEST(Params, Validation) {
  EXPECT_NO_THROW(validate(Params{}));
  Params p;
  p.mu = 0.0;
  EXPECT_THROW(validate(p), ValidationError);
  p = {};
  p.H = 1.0;
  EXPECT_THROW(validate(p), ValidationError);
  p = {};
  p.gamma_diff = 0.0;
  EXPECT_THROW(validate(p), ValidationError);
  p = {};
  p.omega0 = 0.0;
  EXPECT_THROW(validate(p), ValidationError);
  p = {};
  p.alpha = -0.5;  // sign carries meaning; accepted
  EXPECT_NO_THROW(validate(p));
}

TEST(Pressure, FlatSolutionIsLinear) {
  const FieldCase s(8, 16, 16, 0.5);
  const PressureSolve sol = solve_pressure(s.flat(), s.disc);
  EXPECT_TRUE(sol.direct);
  for (std::size_t j = 0; j < s.grid.z_lower.size(); ++j) {
    for (std::size_t p = 0; p < s.grid.points(); ++p) {
      EXPECT_NEAR(sol.pressure(j, p), 2.0 * s.grid.z_lower[j], 1e-13);
    }
  }
}

TEST(Pressure, FlatGradientIsInverseDepth) {
  for (double H : {0.25, 0.3, 0.7}) {
    const FieldCase s(8, 20, 12, H);
    const PressureSolve sol = solve_pressure(s.flat(), s.disc);
    const std::size_t n = s.grid.z_lower.size() - 1;
    const double h = s.grid.h_lower();
    for (std::size_t p = 0; p < s.grid.points(); ++p) {
      const double pz = (3 * sol.pressure(n, p) - 4 * sol.pressure(n - 1, p) +
                         sol.pressure(n - 2, p)) / (2 * h);
      EXPECT_NEAR(pz, 1.0 / H, 1e-10);
    }
  }
}

TEST(Pressure, DeformedInterfaceUsesIterativePathWithinTolerance) {
  const FieldCase s(16, 16, 16, 0.5);
  const PressureSolve sol = solve_pressure(s.wavy(0.05), s.disc);
  EXPECT_FALSE(sol.direct);
  EXPECT_LE(sol.residual, 1e-10);
  for (std::size_t p = 0; p < s.grid.points(); ++p) {
    EXPECT_EQ(sol.pressure(0, p), 0.0);
    EXPECT_EQ(sol.pressure(s.grid.z_lower.size() - 1, p), 1.0);
  }
}

TEST(Pressure, ConstantOffsetIsStillDirect) {
  const FieldCase s(8, 16, 16, 0.5);
  const DiffeoMap m =
      build_diffeomorphism({std::vector<double>(8, 0.1), 0.0}, s.disc);
  const PressureSolve sol = solve_pressure(m, s.disc);
  EXPECT_TRUE(sol.direct);
  // A vertical shift maps the linear profile onto itself.
  for (std::size_t j = 0; j < s.grid.z_lower.size(); ++j) {
    EXPECT_NEAR(sol.pressure(j, 3), s.grid.z_lower[j] / 0.5, 1e-12);
  }
}

TEST(Pressure, Deterministic) {
  const FieldCase s(16, 16, 16, 0.4);
  const DiffeoMap m = s.wavy(0.04);
  EXPECT_EQ(solve_pressure(m, s.disc).pressure, solve_pressure(m, s.disc).pressure);
}

// The transformed operator applied to the pull-back of a harmonic function
// must vanish up to the discretization error, which shrinks like h².
TEST(TransformedOperator, AnnihilatesPulledBackHarmonicFunction) {
  const double H = 0.5, eps = 0.05, k = 2 * kPi;
  std::vector<double> errs;
  for (int n : {16, 32, 64}) {
    const FieldCase s(32, n, n, H);
    const DiffeoMap m = s.wavy(eps);
    LayerField u(s.grid.z_lower.size(), s.grid.points());
    for (std::size_t j = 0; j < s.grid.z_lower.size(); ++j) {
      for (std::size_t p = 0; p < s.grid.points(); ++p) {
        const double y = s.grid.z_lower[j] + m.lower.sigma(j, p);
        u(j, p) = std::sinh(k * y) * std::cos(k * s.grid.coordinate(p, 0)) /
                  std::sinh(k * H);
      }
    }
    LayerField out;
    apply_transformed_operator(m.lower, s.disc.ops(), u, out);
    double err = 0.0;
    for (std::size_t j = 1; j + 1 < s.grid.z_lower.size(); ++j) {
      for (std::size_t p = 0; p < s.grid.points(); ++p) {
        err = std::max(err, std::abs(out(j, p)));
      }
    }
    errs.push_back(err);
  }
  EXPECT_GT(errs[0] / errs[1], 3.5);
  EXPECT_GT(errs[1] / errs[2], 3.5);
}

TEST(Pressure, ManufacturedSolutionSecondOrder) {
  std::vector<double> h, err;
  for (int n : {8, 16, 32, 64}) {
    h.push_back(1.0 / n);
    err.push_back(mms::elliptic_error(n));
  }
  EXPECT_GE(mms::observed_order(h, err), 1.9);
}

TEST(Humidity, SteadyProfileIsStationary) {
  const FieldCase s(8, 16, 16, 0.5);
  const DiffeoMap m = s.flat();
  const LayerField nu0 = steady_humidity_profile(s.grid);
  for (double dt : {1e-4, 0.1, 10.0}) {
    const LayerField nu1 = step_humidity(nu0, m, m, dt, s.disc);
    for (std::size_t i = 0; i < nu0.values().size(); ++i) {
      EXPECT_NEAR(nu1.values()[i], nu0.values()[i], 1e-14);
    }
  }
}

TEST(Humidity, VerticalModeDecaysAtHeatRate) {
  const double H = 0.5, eps = 1e-3;
  const FieldCase s(4, 8, 128, H);
  const DiffeoMap m = s.flat();
  for (int mode : {1, 2}) {
    LayerField nu = steady_humidity_profile(s.grid);
    for (std::size_t j = 0; j < s.grid.z_upper.size(); ++j) {
      for (std::size_t p = 0; p < s.grid.points(); ++p) {
        nu(j, p) += eps * std::sin(kPi * mode * (s.grid.z_upper[j] - H) / (1 - H));
      }
    }
    const double dt = 1e-5;
    const LayerField next = step_humidity(nu, m, m, dt, s.disc);
    const std::size_t mid = s.grid.z_upper.size() / 4;
    const double base = steady_humidity_profile(s.grid)(mid, 0);
    const double ratio = (next(mid, 0) - base) / (nu(mid, 0) - base);
    const double rate = std::pow(kPi * mode / (1 - H), 2);
    EXPECT_NEAR(std::log(ratio) / std::log(std::exp(-rate * dt)), 1.0, 0.02);
  }
}

TEST(Humidity, RejectsNonPositiveStep) {
  const FieldCase s(8, 8, 8, 0.5);
  const DiffeoMap m = s.flat();
  const LayerField nu = steady_humidity_profile(s.grid);
  EXPECT_THROW(step_humidity(nu, m, m, 0.0, s.disc), ValidationError);
  EXPECT_THROW(step_humidity(nu, m, m, -1.0, s.disc), ValidationError);
}

TEST(Humidity, ManufacturedSolutionSecondOrder) {
  std::vector<double> h, err;
  for (int n : {8, 16, 32, 64}) {
    h.push_back(1.0 / n);
    err.push_back(mms::parabolic_error(n));
  }
  EXPECT_GE(mms::observed_order(h, err), 1.9);
}

// With centered transverse differences the implicit flat step is an
// M-matrix solve, so even rough data in [0,1] stays in [0,1].
TEST(MaximumPrinciple, FlatEvolutionStaysInUnitInterval) {
  const FieldCase s(16, 16, 16, 0.5, 1, TransverseScheme::centered);
  const DiffeoMap m = s.flat();
  FieldState st{solve_pressure(m, s.disc).pressure, steady_humidity_profile(s.grid), 0.0};
  // Rough but admissible humidity data between 0 and 1.
  for (std::size_t j = 1; j + 1 < s.grid.z_upper.size(); ++j) {
    for (std::size_t p = 0; p < s.grid.points(); ++p) {
      st.humidity(j, p) = ((j + p) % 3 == 0) ? 1.0 : 0.0;
    }
  }
  for (int i = 0; i < 20; ++i) {
    st.humidity = step_humidity(st.humidity, m, m, 1e-3, s.disc);
    EXPECT_TRUE(satisfies_maximum_principle(st, 1e-10));
  }
}

TEST(BoundaryRows, AreImposedExactly) {
  const FieldCase s(8, 8, 8, 0.5);
  FieldState st{LayerField(9, 8, 0.5), LayerField(9, 8, 0.5), 0.0};
  impose_boundary_rows(st);
  for (std::size_t p = 0; p < 8; ++p) {
    EXPECT_EQ(st.pressure(0, p), 0.0);
    EXPECT_EQ(st.pressure(8, p), 1.0);
    EXPECT_EQ(st.humidity(0, p), 1.0);
    EXPECT_EQ(st.humidity(8, p), 0.0);
  }
}
