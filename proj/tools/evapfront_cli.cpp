// Command line driver: simulation runs, parameter utilities and the
// symbol / model-problem oracles. Reports go to stdout (or --output) as JSON.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <iostream>
#include <optional>

#include "evapfront/config.hpp"
#include "evapfront/errors.hpp"
#include "evapfront/io_util.hpp"
#include "evapfront/modelproblem.hpp"
#include "evapfront/nondim.hpp"
#include "evapfront/simulation.hpp"
#include "evapfront/snapshot.hpp"
#include "evapfront/symbol.hpp"

using namespace evapfront;
using json = nlohmann::json;

namespace {

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json root_json(const DispersionRoot& r) {
  return {{"k", r.k},
          {"lambda", complex_json(r.lambda)},
          {"residual", r.residual},
          {"iterations", r.iterations},
          {"branch_note", r.branch_note}};
}

void emit(const json& j, const std::string& output) {
  const std::string text = j.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    atomic_write(output, text);
  }
}

struct SymbolArgs {
  double alpha = 1.0;
  double beta = 1.0;
  std::vector<double> c{0.0};
};

void add_symbol_args(CLI::App* app, SymbolArgs& a) {
  app->add_option("--alpha", a.alpha, "symbol coefficient alpha")->capture_default_str();
  app->add_option("--beta", a.beta, "symbol coefficient beta")->capture_default_str();
  app->add_option("--c", a.c, "transport vector, one entry per transverse axis")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evapfront: evaporation-front model, symbol and oracle tools"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "seed for randomized initial data");
  std::string output;

  // simulate
  auto* sim = app.add_subcommand("simulate", "run the transformed free-boundary solver");
  std::string config_path, out_dir, restart_path;
  bool halt = false;
  sim->add_option("--config", config_path, "run configuration (INI)")->required();
  sim->add_option("--output-dir", out_dir, "override output.directory");
  sim->add_option("--restart", restart_path, "resume from a snapshot");
  sim->add_flag("--halt", halt, "halt when the well-posedness condition fails");
  sim->add_option("--output", output, "write the summary JSON here");

  // nondim
  auto* nd = app.add_subcommand("nondim", "dimensionless numbers from physical data");
  std::string phys_path;
  double omega0 = 1e-3;
  nd->add_option("--physical", phys_path, "INI file with a [physical] section");
  nd->add_option("--omega0", omega0, "well-posedness threshold")->capture_default_str();
  nd->add_option("--output", output, "write the JSON report here");

  // equilibrium
  auto* eq = app.add_subcommand("equilibrium", "complete alpha/H + beta/(1-H) = 1");
  std::string unknown;
  double eq_alpha = 0.0, eq_beta = 0.0, eq_H = 0.5;
  eq->add_option("--solve-for", unknown, "alpha, beta or H")
      ->required()
      ->check(CLI::IsMember({"alpha", "beta", "H"}));
  eq->add_option("--alpha", eq_alpha);
  eq->add_option("--beta", eq_beta);
  eq->add_option("--H", eq_H);
  eq->add_option("--output", output, "write the JSON report here");

  // symbol-scan
  auto* scan = app.add_subcommand("symbol-scan", "sector scan of the boundary symbol");
  SymbolArgs scan_args;
  add_symbol_args(scan, scan_args);
  SectorSpec sector;
  double eta_sector = 0.05;
  double kappa = 0.0;
  scan->add_option("--delta", sector.delta_s, "half-angle of the z sector")->capture_default_str();
  scan->add_option("--eta-sector", eta_sector, "widening of the lambda sector")->capture_default_str();
  scan->add_option("--kappa", kappa, "lambda sector half-angle (default pi/2 + eta)");
  scan->add_option("--radial", sector.n_samples_radial)->capture_default_str();
  scan->add_option("--angular", sector.n_samples_angular)->capture_default_str();
  scan->add_option("--output", output, "write the JSON report here");

  // dispersion
  auto* disp = app.add_subcommand("dispersion", "roots of the boundary symbol");
  SymbolArgs disp_args;
  add_symbol_args(disp, disp_args);
  std::vector<double> k{1.0};
  double layer_H = 0.0;
  disp->add_option("--k", k, "wavenumber vector")->capture_default_str();
  disp->add_option("--layered-H", layer_H, "also solve the finite-layer relation with this H");
  disp->add_option("--output", output, "write the JSON report here");

  // model-oracle
  auto* oracle = app.add_subcommand("model-oracle", "half-space model problem for one mode");
  SymbolArgs oracle_args;
  add_symbol_args(oracle, oracle_args);
  std::vector<double> ko{1.0};
  double T = 5.0, dt = 1e-3, tau = 0.1;
  std::string forcing = "ramp";
  oracle->add_option("--k", ko)->capture_default_str();
  oracle->add_option("--T", T)->capture_default_str();
  oracle->add_option("--dt", dt)->capture_default_str();
  oracle->add_option("--forcing", forcing, "ramp: 1-exp(-t); pulse: (t/tau^2) exp(-t/tau)")
      ->check(CLI::IsMember({"ramp", "pulse"}))
      ->capture_default_str();
  oracle->add_option("--tau", tau)->capture_default_str();
  oracle->add_option("--output", output, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::validation);
  }

  try {
    if (*sim) {
      RunConfig cfg = load_config(config_path);
      if (seed) cfg.seed = *seed;
      if (!out_dir.empty()) cfg.output.directory = out_dir;
      if (halt) cfg.monitor.halt_on_wellposedness = true;
      validate(cfg);
      std::optional<SimulationState> resume;
      if (!restart_path.empty()) resume = load_snapshot(restart_path, cfg);
      const RunReport rep = run_simulation(cfg, resume);
      const StepRecord& last = rep.records.back();
      emit({{"kind", "simulation"},
            {"config_hash", rep.config_hash},
            {"steps", rep.steps},
            {"t_final", rep.t_final},
            {"halted", rep.halted},
            {"eta_inf", last.eta_inf},
            {"margin_worst", last.margin_worst},
            {"wellposed", last.wellposed},
            {"omega1", last.omega1}},
           output);
    } else if (*nd) {
      const PhysicalParams phys =
          phys_path.empty() ? PhysicalParams{} : parse_physical(read_file(phys_path));
      const NondimResult r = nondimensionalize(phys, omega0);
      emit({{"kind", "nondim"},
            {"alpha", r.params.alpha},
            {"beta", r.params.beta},
            {"gamma", r.params.gamma_diff},
            {"H", r.params.H},
            {"mu", r.params.mu},
            {"omega0", r.params.omega0},
            {"time_unit_nondim_s", r.time_unit_nondim},
            {"time_unit_rescaled_s", r.time_unit_rescaled},
            {"equilibrium_residual",
             r.params.alpha / r.params.H + r.params.beta / (1.0 - r.params.H) - 1.0}},
           output);
    } else if (*eq) {
      const EquilibriumUnknown u = unknown == "alpha" ? EquilibriumUnknown::alpha
                                   : unknown == "beta" ? EquilibriumUnknown::beta
                                                       : EquilibriumUnknown::H;
      json sols = json::array();
      for (const auto& s : solve_equilibrium(u, eq_alpha, eq_beta, eq_H)) {
        sols.push_back({{"alpha", s.alpha},
                        {"beta", s.beta},
                        {"H", s.H},
                        {"flat_margin", s.alpha / s.H - s.beta / (1.0 - s.H)}});
      }
      emit({{"kind", "equilibrium"}, {"solve_for", unknown}, {"solutions", sols}},
           output);
    } else if (*scan) {
      const SymbolParams p =
          make_symbol_params(scan_args.alpha, scan_args.beta, scan_args.c);
      if (kappa > 0.0) sector.kappa = kappa;
      const ScanReport r = n_parabolicity_scan(p, sector, eta_sector);
      json j = {{"kind", "symbol-scan"},
                {"alpha", p.alpha_s},
                {"beta", p.beta_s},
                {"c", p.c},
                {"delta", sector.delta_s},
                {"eta_sector", eta_sector},
                {"pass", r.pass},
                {"samples", r.samples},
                {"min_abs_half", r.min_abs_half},
                {"min_abs_one", r.min_abs_one},
                {"min_abs_top", r.min_abs_top},
                {"max_arg_half", r.max_arg_half},
                {"arg_limit", r.arg_limit},
                {"min_re_minus_norm", r.min_re_minus_norm},
                {"minus_norm_bound", r.minus_norm_bound},
                {"bounds_hold", r.bounds_hold},
                {"largest_delta", r.largest_delta}};
      j["combined_bound"] = r.combined_bound ? json(*r.combined_bound) : json(nullptr);
      j["first_violation"] =
          r.first_violation ? json(describe_sample(*r.first_violation)) : json(nullptr);
      emit(j, output);
    } else if (*disp) {
      const SymbolParams p =
          make_symbol_params(disp_args.alpha, disp_args.beta, disp_args.c);
      json j = {{"kind", "dispersion"},
                {"alpha", p.alpha_s},
                {"beta", p.beta_s},
                {"c", p.c},
                {"halfspace", root_json(dispersion_root(p, k))}};
      if (layer_H > 0.0) {
        j["layered"] = root_json(layered_dispersion_root(p, k, layer_H));
        j["layered"]["H"] = layer_H;
      }
      emit(j, output);
    } else if (*oracle) {
      const SymbolParams p =
          make_symbol_params(oracle_args.alpha, oracle_args.beta, oracle_args.c);
      ForcingFunction g;
      if (forcing == "ramp") {
        g = [](double t) { return Complex(1.0 - std::exp(-t)); };
      } else {
        g = [tau](double t) { return Complex(t / (tau * tau) * std::exp(-t / tau)); };
      }
      const ModeSolution s = solve_halfspace_mode(p, ko, g, T, dt);
      json series = json::array();
      const std::size_t stride = std::max<std::size_t>(1, s.times.size() / 200);
      for (std::size_t i = 0; i < s.times.size(); i += stride) {
        series.push_back({{"t", s.times[i]},
                          {"re", s.phi_hat[i].real()},
                          {"im", s.phi_hat[i].imag()}});
      }
      const std::size_t n = s.phi_hat.size();
      const std::size_t half = n / 2;
      double slope = 0.0;
      if (std::abs(s.phi_hat[half]) > 0.0 && std::abs(s.phi_hat.back()) > 0.0) {
        slope = std::log(std::abs(s.phi_hat.back()) / std::abs(s.phi_hat[half])) /
                (s.times.back() - s.times[half]);
      }
      emit({{"kind", "model-oracle"},
            {"alpha", p.alpha_s},
            {"beta", p.beta_s},
            {"c", p.c},
            {"k", ko},
            {"forcing", forcing},
            {"truncation_depth", s.truncation_depth},
            {"final", complex_json(s.phi_hat.back())},
            {"late_log_slope", slope},
            {"series", series}},
           output);
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::validation);
  } catch (const HaltError& e) {
    std::cerr << "halted: " << e.what() << "\n";
    return static_cast<int>(ExitCode::halt);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return static_cast<int>(ExitCode::numerical);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::numerical);
  }
  return 0;
}
