#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evapfront/config.hpp"
#include "evapfront/fields.hpp"
#include "evapfront/geometry.hpp"
#include "evapfront/interface.hpp"

namespace evapfront {

/// Everything the future of a run depends on. The pressure is a function of
/// the interface and is carried only for output.
struct SimulationState {
  InterfaceState interface;
  FieldState fields;
  long long step = 0;
  bool operator==(const SimulationState&) const = default;
};

/// Diagnostics of one state; one row of the time series.
struct StepRecord {
  long long step = 0;
  double t = 0.0;
  double eta_inf = 0.0;
  double eta_l2 = 0.0;  // root mean square over the transverse nodes
  double margin_worst = 0.0;
  bool wellposed = false;
  double omega1 = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  double nu_min = 0.0;
  double nu_max = 0.0;
  bool max_principle = false;
};

InterfaceState initial_interface(const RunConfig& cfg, const Grid& grid);

class Simulation {
 public:
  /// Fresh run from cfg.initial; ValidationError when η₀ breaches the margin.
  explicit Simulation(RunConfig cfg);
  /// Resumes from a saved state.
  Simulation(RunConfig cfg, SimulationState state);

  const RunConfig& config() const { return cfg_; }
  const Discretization& discretization() const { return disc_; }
  const SimulationState& state() const { return state_; }
  double time() const { return state_.interface.time; }

  /// Diagnostics of the current state (solves for its pressure once).
  StepRecord record();
  /// One Heun step of the interface with the humidity step in between.
  void advance();

 private:
  struct Current {
    DiffeoMap map;
    std::vector<double> flux;
    WellposednessReport wellposedness;
  };
  const Current& current();
  Current evaluate(const InterfaceState& eta, const LayerField& humidity,
                   LayerField& pressure) const;

  RunConfig cfg_;
  Discretization disc_;
  SimulationState state_;
  std::optional<Current> current_;
};

struct RunReport {
  long long steps = 0;
  double t_final = 0.0;
  std::vector<StepRecord> records;
  bool halted = false;
  std::string halt_reason;
  std::string config_hash;
  double time_unit_ratio = 1.0;  // rescaled time unit per nondim unit (1/γ)
  SimulationState final_state;
};

std::string csv_header();
std::string csv_row(const StepRecord& r);

/// Runs cfg from its initial data, or from `resume` when given, until
/// t_end. With cfg.output.directory set, writes timeseries.csv, report.json
/// and snapshots there. A HaltError from the margin or the well-posedness
/// monitor (when enabled) propagates after the outputs are written.
RunReport run_simulation(const RunConfig& cfg,
                         const std::optional<SimulationState>& resume = {});

}  // namespace evapfront
