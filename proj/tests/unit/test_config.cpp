#include <gtest/gtest.h>

#include <filesystem>
#include <bit>
#include <cmath>
#include <random>

#include <unistd.h>

#include "evapfront/config.hpp"
#include "evapfront/errors.hpp"
#include "evapfront/io_util.hpp"

using namespace evapfront;

namespace {

RunConfig random_config(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> n(4, 64);
  RunConfig c;
  c.params.alpha = u(gen) - 0.5;
  c.params.beta = u(gen) * 1e-7;
  c.params.gamma_diff = 0.1 + u(gen);
  c.params.mu = 1.0 - u(gen) * 1e-3;
  c.params.H = 0.2 + 0.6 * u(gen);
  c.params.omega0 = u(gen) * 1e-2 + 1e-300;
  c.grid.n_transverse = n(gen);
  c.grid.n_lower = n(gen);
  c.grid.n_upper = n(gen);
  c.grid.dims = 1 + static_cast<int>(u(gen) < 0.5);
  c.grid.scheme = u(gen) < 0.5 ? TransverseScheme::spectral : TransverseScheme::centered;
  c.time.dt = u(gen) / 3.0;
  c.time.t_end = 10 * u(gen) + 1e-3;
  c.time.cfl = 0.1 + u(gen);
  c.initial.eta_kind = static_cast<EtaInit>(n(gen) % 4);
  c.initial.eta_amplitude = u(gen) / 7.0;
  c.initial.eta_mode_x = n(gen);
  c.initial.eta_mode_y = -n(gen);
  for (int i = 0; i < 5; ++i) c.initial.eta_values.push_back(u(gen) - 0.5);
  c.initial.nu_kind = u(gen) < 0.5 ? NuInit::steady : NuInit::values;
  for (int i = 0; i < 3; ++i) c.initial.nu_values.push_back(u(gen));
  c.monitor.delta_j = u(gen);
  c.monitor.gamma_margin = u(gen) / 10;
  c.monitor.halt_on_wellposedness = u(gen) < 0.5;
  c.solver.elliptic_tol = std::pow(10.0, -12 * u(gen));
  c.solver.elliptic_max_iter = n(gen);
  c.solver.elliptic_restart = n(gen);
  c.solver.max_principle_tol = u(gen) * 1e-6;
  c.output.directory = "out_" + std::to_string(n(gen));
  c.output.every = n(gen);
  c.output.snapshot_every = n(gen);
  c.seed = gen();
  return c;
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
  const RunConfig c;
  EXPECT_EQ(parse_config(serialize_config(c)), c);
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, EmptyTextGivesDefaults) { EXPECT_EQ(parse_config(""), RunConfig{}); }

// Property: serialize then parse is the identity, bit for bit.
TEST(Config, RandomConfigsRoundTrip) {
  std::mt19937_64 gen(123);
  for (int i = 0; i < 100; ++i) {
    const RunConfig c = random_config(gen);
    const std::string text = serialize_config(c);
    const RunConfig back = parse_config(text);
    EXPECT_EQ(back, c) << text;
    EXPECT_EQ(serialize_config(back), text);
  }
}

TEST(Config, ParsesExample) {
  const RunConfig c = parse_config(
      "[params]\nalpha = 0.1\nbeta = 0.4\nH = 0.5\n"
      "[grid]\nn_transverse = 16\nscheme = centered\n"
      "[initial]\neta = cosine\neta_amplitude = 1e-3\neta_values = 0.1, -0.2\n"
      "[monitor]\nhalt_on_wellposedness = true\n[run]\nseed = 42\n");
  EXPECT_DOUBLE_EQ(c.params.beta, 0.4);
  EXPECT_EQ(c.grid.n_transverse, 16);
  EXPECT_EQ(c.grid.scheme, TransverseScheme::centered);
  EXPECT_EQ(c.initial.eta_kind, EtaInit::cosine);
  EXPECT_EQ(c.initial.eta_values, (std::vector<double>{0.1, -0.2}));
  EXPECT_TRUE(c.monitor.halt_on_wellposedness);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.grid.n_lower, 32);
}

TEST(Config, RejectsUnknownAndMalformedEntries) {
  EXPECT_THROW(parse_config("[params]\nalfa = 1\n"), ValidationError);
  EXPECT_THROW(parse_config("[extras]\nx = 1\n"), ValidationError);
  EXPECT_THROW(parse_config("[params]\nalpha = 0.1x\n"), ValidationError);
  EXPECT_THROW(parse_config("[params]\nalpha = \n"), ValidationError);
  EXPECT_THROW(parse_config("[grid]\nn_lower = 3.5\n"), ValidationError);
  EXPECT_THROW(parse_config("[grid]\nscheme = upwind\n"), ValidationError);
  EXPECT_THROW(parse_config("[monitor]\nhalt_on_wellposedness = maybe\n"), ValidationError);
  EXPECT_THROW(parse_config("[run]\nseed = -1\n"), ValidationError);
  EXPECT_THROW(parse_config("alpha = 1\n"), ValidationError);
  EXPECT_THROW(parse_config("[params\nalpha = 1\n"), ValidationError);
}

TEST(Config, ValidationRules) {
  RunConfig c;
  c.time.dt = 0.25 / 32 * 1.01;
  EXPECT_THROW(validate(c), ValidationError);
  c.time.dt = 0.25 / 32;
  EXPECT_NO_THROW(validate(c));
  c = {};
  c.monitor.gamma_margin = 0.5;
  EXPECT_THROW(validate(c), ValidationError);
  c = {};
  c.grid.n_lower = 3;
  EXPECT_THROW(validate(c), ValidationError);
  c = {};
  c.initial.eta_kind = EtaInit::values;
  c.initial.eta_values.assign(31, 0.0);
  EXPECT_THROW(validate(c), ValidationError);
  c.initial.eta_values.assign(32, 0.0);
  EXPECT_NO_THROW(validate(c));
  c.initial.nu_kind = NuInit::values;
  c.initial.nu_values.assign(32 * 33, 0.5);
  EXPECT_NO_THROW(validate(c));
  c = {};
  c.params.mu = 0.0;
  EXPECT_THROW(validate(c), ValidationError);
}

TEST(Config, HashTracksTrajectoryFields) {
  const RunConfig base;
  const std::string h = config_hash(base);
  EXPECT_EQ(h.size(), 64u);
  EXPECT_EQ(h, config_hash(parse_config(serialize_config(base))));
  RunConfig c = base;
  c.time.t_end = 7.0;
  c.output.directory = "elsewhere";
  c.output.every = 5;
  c.initial.eta_kind = EtaInit::cosine;
  c.seed = 9;
  EXPECT_EQ(config_hash(c), h);
  c = base;
  c.params.alpha = std::nextafter(base.params.alpha, 1.0);
  EXPECT_NE(config_hash(c), h);
  c = base;
  c.grid.n_upper = 33;
  EXPECT_NE(config_hash(c), h);
  c = base;
  c.time.dt = 5e-4;
  EXPECT_NE(config_hash(c), h);
  c = base;
  c.monitor.halt_on_wellposedness = true;
  EXPECT_NE(config_hash(c), h);
}

TEST(Config, LoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("evapfront_cfg_" + std::to_string(::getpid()) + ".ini");
  RunConfig c;
  c.params.alpha = 0.3;
  atomic_write(path, serialize_config(c));
  EXPECT_EQ(load_config(path), c);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ValidationError);
}

TEST(Config, GridFromConfig) {
  RunConfig c;
  c.grid.dims = 2;
  c.grid.n_transverse = 8;
  c.params.H = 0.3;
  const Grid g = make_grid(c);
  EXPECT_EQ(g.points(), 64u);
  EXPECT_DOUBLE_EQ(g.H, 0.3);
}

TEST(Config, PhysicalSection) {
  const PhysicalParams p =
      parse_physical("[physical]\nlayer_L = 2\nlevel_h = 0.5\nnu_star = 0.03\n");
  EXPECT_DOUBLE_EQ(p.layer_L, 2.0);
  EXPECT_DOUBLE_EQ(p.nu_star, 0.03);
  EXPECT_DOUBLE_EQ(p.porosity_m, PhysicalParams{}.porosity_m);
  EXPECT_THROW(parse_physical("[physical]\nlength = 2\n"), ValidationError);
  EXPECT_THROW(parse_physical("[params]\nalpha = 2\n"), ValidationError);
}

TEST(IoUtil, HexRoundTripIsExact) {
  std::mt19937_64 gen(2);
  std::vector<double> v{0.0, -0.0, 1e-310, -1.5, INFINITY, 0.1};
  for (int i = 0; i < 50; ++i) v.push_back(std::bit_cast<double>(gen() >> 2));
  const std::vector<double> back = hex_decode(hex_encode(v));
  ASSERT_EQ(back.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back[i]), std::bit_cast<std::uint64_t>(v[i]));
  }
  EXPECT_EQ(hex_encode(std::vector<double>{1.0}), "3ff0000000000000");
  EXPECT_THROW(hex_decode("3ff0"), ValidationError);
  EXPECT_THROW(hex_decode("3ff000000000000g"), ValidationError);
}

TEST(IoUtil, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(IoUtil, ShortestDoubleFormatting) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
