#include "evapfront/simulation.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "evapfront/errors.hpp"
#include "evapfront/io_util.hpp"
#include "evapfront/snapshot.hpp"

namespace evapfront {

namespace {

GeometryOptions geometry_options(const RunConfig& cfg) {
  return {cfg.monitor.delta_j, cfg.monitor.gamma_margin};
}

EllipticOptions elliptic_options(const RunConfig& cfg) {
  return {cfg.solver.elliptic_tol, cfg.solver.elliptic_max_iter,
          cfg.solver.elliptic_restart};
}

LayerField initial_humidity(const RunConfig& cfg, const Grid& grid) {
  if (cfg.initial.nu_kind == NuInit::steady) return steady_humidity_profile(grid);
  LayerField nu(grid.z_upper.size(), grid.points());
  std::copy(cfg.initial.nu_values.begin(), cfg.initial.nu_values.end(),
            nu.values().begin());
  return nu;
}

long long step_count(const RunConfig& cfg) {
  return std::max(1LL, static_cast<long long>(
                           std::ceil(cfg.time.t_end / cfg.time.dt - 1e-9)));
}

}  // namespace

InterfaceState initial_interface(const RunConfig& cfg, const Grid& grid) {
  const InitialSpec& ini = cfg.initial;
  InterfaceState s;
  s.eta.assign(grid.points(), 0.0);
  switch (ini.eta_kind) {
    case EtaInit::flat:
      break;
    case EtaInit::cosine:
      for (std::size_t p = 0; p < s.eta.size(); ++p) {
        double phase = ini.eta_mode_x * grid.coordinate(p, 0);
        if (grid.transverse_dims == 2) {
          phase += ini.eta_mode_y * grid.coordinate(p, 1);
        }
        s.eta[p] = ini.eta_amplitude * std::cos(2.0 * std::numbers::pi * phase);
      }
      break;
    case EtaInit::random: {
      // Uniform draws built from the raw 64-bit stream, so the sequence
      // depends only on the seed.
      std::mt19937_64 gen(cfg.seed);
      for (double& e : s.eta) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        e = ini.eta_amplitude * (2.0 * u - 1.0);
      }
      break;
    }
    case EtaInit::values:
      s.eta = ini.eta_values;
      break;
  }
  return s;
}

Simulation::Simulation(RunConfig cfg)
    : cfg_(std::move(cfg)),
      disc_(make_grid(cfg_), cfg_.grid.scheme) {
  validate(cfg_);
  const Grid& g = disc_.grid();
  state_.interface = initial_interface(cfg_, g);
  if (!within_margin(state_.interface, cfg_.params.H, cfg_.monitor.gamma_margin)) {
    throw ValidationError("initial interface breaches the admissible band");
  }
  state_.fields.pressure = linear_pressure_profile(g);
  state_.fields.humidity = initial_humidity(cfg_, g);
  state_.fields.time = 0.0;
  impose_boundary_rows(state_.fields);
}

Simulation::Simulation(RunConfig cfg, SimulationState state)
    : cfg_(std::move(cfg)),
      disc_(make_grid(cfg_), cfg_.grid.scheme),
      state_(std::move(state)) {
  validate(cfg_);
  const Grid& g = disc_.grid();
  if (state_.interface.eta.size() != g.points() ||
      state_.fields.humidity.levels() != g.z_upper.size() ||
      state_.fields.humidity.points() != g.points() ||
      state_.fields.pressure.levels() != g.z_lower.size() ||
      state_.fields.pressure.points() != g.points()) {
    throw ValidationError("restored state does not match the configured grid");
  }
}

Simulation::Current Simulation::evaluate(const InterfaceState& eta,
                                         const LayerField& humidity,
                                         LayerField& pressure) const {
  Current c;
  c.map = build_diffeomorphism(eta, disc_, geometry_options(cfg_));
  pressure = solve_pressure(c.map, disc_, elliptic_options(cfg_)).pressure;
  const FieldState f{pressure, humidity, eta.time};
  c.flux = interface_normal_flux(f, c.map, cfg_.params, disc_.grid());
  c.wellposedness = check_wellposedness(f, c.map, cfg_.params, disc_.grid());
  return c;
}

const Simulation::Current& Simulation::current() {
  if (!current_) {
    current_ = evaluate(state_.interface, state_.fields.humidity,
                        state_.fields.pressure);
  }
  return *current_;
}

StepRecord Simulation::record() {
  const Current& c = current();
  StepRecord r;
  r.step = state_.step;
  r.t = state_.interface.time;
  double sq = 0.0;
  for (double e : state_.interface.eta) {
    r.eta_inf = std::max(r.eta_inf, std::abs(e));
    sq += e * e;
  }
  r.eta_l2 = std::sqrt(sq / static_cast<double>(state_.interface.eta.size()));
  r.margin_worst = c.wellposedness.worst;
  r.wellposed = c.wellposedness.satisfied;
  r.omega1 = c.wellposedness.omega1_min;
  r.p_min = state_.fields.pressure.min();
  r.p_max = state_.fields.pressure.max();
  r.nu_min = state_.fields.humidity.min();
  r.nu_max = state_.fields.humidity.max();
  r.max_principle =
      satisfies_maximum_principle(state_.fields, cfg_.solver.max_principle_tol);
  return r;
}

void Simulation::advance() {
  const double dt = cfg_.time.dt;
  const MarginSpec margin{cfg_.params.H, cfg_.monitor.gamma_margin};
  const Current& now = current();

  InterfaceState predicted = heun_predict(state_.interface, now.flux, dt);
  check_margin(predicted, margin.H, margin.gamma_margin);
  const DiffeoMap next_map =
      build_diffeomorphism(predicted, disc_, geometry_options(cfg_));
  LayerField humidity = step_humidity(state_.fields.humidity, now.map,
                                      next_map, dt, disc_);
  LayerField pressure;
  const Current pred = evaluate(predicted, humidity, pressure);

  InterfaceState next =
      heun_correct(state_.interface, now.flux, pred.flux, dt);
  // Time is derived from the step count so that resumed runs match.
  next.time = static_cast<double>(state_.step + 1) * dt;
  check_margin(next, margin.H, margin.gamma_margin);

  state_.interface = std::move(next);
  state_.fields.humidity = std::move(humidity);
  state_.fields.pressure = std::move(pressure);
  state_.fields.time = state_.interface.time;
  ++state_.step;
  current_.reset();
}

std::string csv_header() {
  return "step,t,eta_inf,eta_l2,margin_worst,wellposed,omega1,p_min,p_max,"
         "nu_min,nu_max,max_principle\n";
}

std::string csv_row(const StepRecord& r) {
  std::string s = std::to_string(r.step);
  for (double v : {r.t, r.eta_inf, r.eta_l2, r.margin_worst}) {
    s += "," + format_double(v);
  }
  s += r.wellposed ? ",1" : ",0";
  for (double v : {r.omega1, r.p_min, r.p_max, r.nu_min, r.nu_max}) {
    s += "," + format_double(v);
  }
  s += r.max_principle ? ",1\n" : ",0\n";
  return s;
}

namespace {

nlohmann::json report_json(const RunReport& rep, const RunConfig& cfg) {
  nlohmann::json j;
  j["kind"] = "simulation";
  j["config_hash"] = rep.config_hash;
  j["steps"] = rep.steps;
  j["t_final"] = rep.t_final;
  j["halted"] = rep.halted;
  j["halt_reason"] = rep.halt_reason;
  j["coefficient_convention"] =
      "alpha and beta physical; omega1 uses alpha/mu and beta/mu";
  j["time_units"] = {
      {"simulated", "rescaled (unit diffusivity)"},
      {"rescaled_per_nondim", rep.time_unit_ratio},
      {"gamma_diff", cfg.params.gamma_diff}};
  if (!rep.records.empty()) {
    const StepRecord& last = rep.records.back();
    j["final"] = {{"eta_inf", last.eta_inf},
                  {"eta_l2", last.eta_l2},
                  {"margin_worst", last.margin_worst},
                  {"wellposed", last.wellposed},
                  {"omega1", last.omega1}};
  }
  return j;
}

// Re-throws the active exception with the step index prepended, keeping its
// family so that exit codes survive.
[[noreturn]] void rethrow_at(long long step) {
  const std::string at = "step " + std::to_string(step) + ": ";
  try {
    throw;
  } catch (const HaltError& e) {
    throw HaltError(at + e.what());
  } catch (const DegenerateMapError& e) {
    throw DegenerateMapError(at + e.what());
  } catch (const BranchCutError& e) {
    throw BranchCutError(at + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(at + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(at + e.what());
  }
}

}  // namespace

RunReport run_simulation(const RunConfig& cfg,
                         const std::optional<SimulationState>& resume) {
  Simulation sim = resume ? Simulation(cfg, *resume) : Simulation(cfg);
  const std::filesystem::path dir = cfg.output.directory;
  const bool write = !dir.empty();
  if (write) std::filesystem::create_directories(dir);

  RunReport rep;
  rep.config_hash = config_hash(cfg);
  rep.time_unit_ratio = 1.0 / cfg.params.gamma_diff;
  const long long total = step_count(cfg);
  std::string csv = csv_header();

  auto finish = [&] {
    rep.steps = sim.state().step;
    rep.t_final = sim.time();
    rep.final_state = sim.state();
    if (!write) return;
    atomic_write(dir / "timeseries.csv", csv);
    atomic_write(dir / "report.json", report_json(rep, cfg).dump(2) + "\n");
    save_snapshot(dir / (rep.halted ? "snapshot_halt.json" : "snapshot_final.json"),
                  sim.state(), cfg);
  };

  try {
    for (;;) {
      const StepRecord r = sim.record();
      const bool last = sim.state().step >= total;
      if (r.step % cfg.output.every == 0 || last) {
        rep.records.push_back(r);
        csv += csv_row(r);
      }
      if (cfg.monitor.halt_on_wellposedness && !r.wellposed) {
        std::ostringstream msg;
        msg << "well-posedness condition violated: margin " << r.margin_worst
            << " > -omega0 at t = " << r.t;
        throw HaltError(msg.str());
      }
      if (last) break;
      sim.advance();
      if (write && cfg.output.snapshot_every > 0 &&
          sim.state().step % cfg.output.snapshot_every == 0) {
        save_snapshot(dir / ("snapshot_" + std::to_string(sim.state().step) +
                             ".json"),
                      sim.state(), cfg);
      }
    }
  } catch (const HaltError& e) {
    rep.halted = true;
    rep.halt_reason = e.what();
    finish();
    rethrow_at(sim.state().step);
  } catch (const std::runtime_error&) {
    if (write) {
      save_snapshot(dir / "snapshot_failure.json", sim.state(), cfg);
    }
    rethrow_at(sim.state().step);
  }
  finish();
  return rep;
}

}  // namespace evapfront
