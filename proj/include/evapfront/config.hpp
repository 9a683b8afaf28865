#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "evapfront/fields.hpp"
#include "evapfront/grid.hpp"
#include "evapfront/nondim.hpp"

namespace evapfront {

struct GridSpec {
  int n_transverse = 32;
  int n_lower = 32;
  int n_upper = 32;
  int dims = 1;
  TransverseScheme scheme = TransverseScheme::spectral;
  bool operator==(const GridSpec&) const = default;
};

struct TimeSpec {
  double dt = 1e-3;
  double t_end = 0.1;
  double cfl = 0.25;  // dt may not exceed cfl * transverse spacing
  bool operator==(const TimeSpec&) const = default;
};

enum class EtaInit { flat, cosine, random, values };
enum class NuInit { steady, values };

/// Initial interface and humidity. `cosine` is amplitude·cos(2π(m_x x + m_y y)),
/// `random` draws each node uniformly from [−amplitude, amplitude] with the
/// run seed, `values` lists η node by node (humidity: level-major).
struct InitialSpec {
  EtaInit eta_kind = EtaInit::flat;
  double eta_amplitude = 0.0;
  int eta_mode_x = 1;
  int eta_mode_y = 0;
  std::vector<double> eta_values;
  NuInit nu_kind = NuInit::steady;
  std::vector<double> nu_values;
  bool operator==(const InitialSpec&) const = default;
};

struct MonitorSpec {
  double delta_j = 0.1;
  double gamma_margin = 0.05;
  bool halt_on_wellposedness = false;
  bool operator==(const MonitorSpec&) const = default;
};

struct SolverSpec {
  double elliptic_tol = 1e-10;
  int elliptic_max_iter = 300;
  int elliptic_restart = 50;
  double max_principle_tol = 1e-8;
  bool operator==(const SolverSpec&) const = default;
};

struct OutputSpec {
  std::string directory;  // empty: nothing is written
  int every = 1;          // time-series cadence in steps
  int snapshot_every = 0; // 0: only the final snapshot
  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  Params params;
  GridSpec grid;
  TimeSpec time;
  InitialSpec initial;
  MonitorSpec monitor;
  SolverSpec solver;
  OutputSpec output;
  std::uint64_t seed = 0;
  bool operator==(const RunConfig&) const = default;
};

/// Parses the sectioned key = value format; unknown sections or keys are
/// rejected. Missing keys keep their defaults.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Every field, in a fixed order, with round-trip exact numbers.
std::string serialize_config(const RunConfig& cfg);

/// Checks ranges and the step restriction dt <= cfl * dx.
void validate(const RunConfig& cfg);

/// SHA-256 over the fields that change the computed trajectory from a given
/// state: parameters, grid, time step, monitors and solver settings.
std::string config_hash(const RunConfig& cfg);

Grid make_grid(const RunConfig& cfg);

/// Reads a [physical] section whose keys are the PhysicalParams member
/// names; missing keys keep their defaults.
PhysicalParams parse_physical(std::string_view text);

std::string to_string(TransverseScheme scheme);
std::string to_string(EtaInit kind);
std::string to_string(NuInit kind);

}  // namespace evapfront
