#include "evapfront/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "evapfront/errors.hpp"
#include "evapfront/io_util.hpp"

namespace evapfront {

namespace {

namespace pt = boost::property_tree;

double parse_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) {
    throw ValidationError("config: " + key + " is not a number: '" + s + "'");
  }
  return v;
}

template <class T>
T parse_int(const std::string& key, const std::string& s) {
  T v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) {
    throw ValidationError("config: " + key + " is not an integer: '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ValidationError("config: " + key + " is not a boolean: '" + s + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(parse_double(key, item.substr(b, e - b + 1)));
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

TransverseScheme parse_scheme(const std::string& s) {
  if (s == "spectral") return TransverseScheme::spectral;
  if (s == "centered") return TransverseScheme::centered;
  throw ValidationError("config: unknown transverse scheme '" + s + "'");
}

EtaInit parse_eta(const std::string& s) {
  if (s == "flat") return EtaInit::flat;
  if (s == "cosine") return EtaInit::cosine;
  if (s == "random") return EtaInit::random;
  if (s == "values") return EtaInit::values;
  throw ValidationError("config: unknown eta initializer '" + s + "'");
}

NuInit parse_nu(const std::string& s) {
  if (s == "steady") return NuInit::steady;
  if (s == "values") return NuInit::values;
  throw ValidationError("config: unknown humidity initializer '" + s + "'");
}

// One entry per key: how to read it and how to print it. Keeping both
// directions in one table is what makes the round trip exact.
struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> read;
  std::function<std::string(const RunConfig&)> write;
};
using Section = std::vector<std::pair<std::string, Field>>;

template <class Get>
Field real(Get get) {
  return {[get](RunConfig& c, const std::string& k, const std::string& v) {
            get(c) = parse_double(k, v);
          },
          [get](const RunConfig& c) {
            return format_double(get(c));
          }};
}

template <class Get>
Field integer(Get get) {
  return {[get](RunConfig& c, const std::string& k, const std::string& v) {
            using T = std::remove_reference_t<decltype(get(c))>;
            get(c) = parse_int<T>(k, v);
          },
          [get](const RunConfig& c) {
            return std::to_string(get(c));
          }};
}

template <class Get>
Field boolean(Get get) {
  return {[get](RunConfig& c, const std::string& k, const std::string& v) {
            get(c) = parse_bool(k, v);
          },
          [get](const RunConfig& c) {
            return std::string(get(c) ? "true"
                                                               : "false");
          }};
}

template <class Get, class Parse>
Field word(Get get, Parse parse) {
  return {[get, parse](RunConfig& c, const std::string&, const std::string& v) {
            get(c) = parse(v);
          },
          [get](const RunConfig& c) {
            return to_string(get(c));
          }};
}

template <class Get>
Field list(Get get) {
  return {[get](RunConfig& c, const std::string& k, const std::string& v) {
            get(c) = parse_list(k, v);
          },
          [get](const RunConfig& c) {
            return join(get(c));
          }};
}

const std::vector<std::pair<std::string, Section>>& schema() {
  static const std::vector<std::pair<std::string, Section>> s = {
      {"params",
       {{"alpha", real([](auto& c) -> auto& { return c.params.alpha; })},
        {"beta", real([](auto& c) -> auto& { return c.params.beta; })},
        {"gamma_diff",
         real([](auto& c) -> auto& { return c.params.gamma_diff; })},
        {"mu", real([](auto& c) -> auto& { return c.params.mu; })},
        {"H", real([](auto& c) -> auto& { return c.params.H; })},
        {"omega0",
         real([](auto& c) -> auto& { return c.params.omega0; })}}},
      {"grid",
       {{"n_transverse",
         integer([](auto& c) -> auto& { return c.grid.n_transverse; })},
        {"n_lower", integer([](auto& c) -> auto& { return c.grid.n_lower; })},
        {"n_upper", integer([](auto& c) -> auto& { return c.grid.n_upper; })},
        {"dims", integer([](auto& c) -> auto& { return c.grid.dims; })},
        {"scheme", word([](auto& c) -> auto& {
                          return c.grid.scheme;
                        },
                        parse_scheme)}}},
      {"time",
       {{"dt", real([](auto& c) -> auto& { return c.time.dt; })},
        {"t_end", real([](auto& c) -> auto& { return c.time.t_end; })},
        {"cfl", real([](auto& c) -> auto& { return c.time.cfl; })}}},
      {"initial",
       {{"eta", word([](auto& c) -> auto& { return c.initial.eta_kind; },
                     parse_eta)},
        {"eta_amplitude",
         real([](auto& c) -> auto& { return c.initial.eta_amplitude; })},
        {"eta_mode_x",
         integer([](auto& c) -> auto& { return c.initial.eta_mode_x; })},
        {"eta_mode_y",
         integer([](auto& c) -> auto& { return c.initial.eta_mode_y; })},
        {"eta_values", list([](auto& c) -> auto& {
           return c.initial.eta_values;
         })},
        {"nu", word([](auto& c) -> auto& { return c.initial.nu_kind; },
                    parse_nu)},
        {"nu_values", list([](auto& c) -> auto& {
           return c.initial.nu_values;
         })}}},
      {"monitor",
       {{"delta_j", real([](auto& c) -> auto& { return c.monitor.delta_j; })},
        {"gamma_margin",
         real([](auto& c) -> auto& { return c.monitor.gamma_margin; })},
        {"halt_on_wellposedness", boolean([](auto& c) -> auto& {
           return c.monitor.halt_on_wellposedness;
         })}}},
      {"solver",
       {{"elliptic_tol",
         real([](auto& c) -> auto& { return c.solver.elliptic_tol; })},
        {"elliptic_max_iter",
         integer([](auto& c) -> auto& { return c.solver.elliptic_max_iter; })},
        {"elliptic_restart",
         integer([](auto& c) -> auto& { return c.solver.elliptic_restart; })},
        {"max_principle_tol", real([](auto& c) -> auto& {
           return c.solver.max_principle_tol;
         })}}},
      {"output",
       {{"directory",
         {[](RunConfig& c, const std::string&, const std::string& v) {
            c.output.directory = v;
          },
          [](const RunConfig& c) { return c.output.directory; }}},
        {"every", integer([](auto& c) -> auto& { return c.output.every; })},
        {"snapshot_every",
         integer([](auto& c) -> auto& { return c.output.snapshot_every; })}}},
      {"run",
       {{"seed",
         integer([](auto& c) -> auto& { return c.seed; })}}},
  };
  return s;
}

std::string write_sections(const RunConfig& cfg,
                           const std::vector<std::string>& keep,
                           bool skip_time_end) {
  std::string out;
  for (const auto& [name, fields] : schema()) {
    if (!keep.empty() &&
        std::find(keep.begin(), keep.end(), name) == keep.end()) {
      continue;
    }
    if (!out.empty()) out += "\n";
    out += "[" + name + "]\n";
    for (const auto& [key, field] : fields) {
      if (skip_time_end && name == "time" && key == "t_end") continue;
      out += key + " = " + field.write(cfg) + "\n";
    }
  }
  return out;
}

}  // namespace

std::string to_string(TransverseScheme s) {
  return s == TransverseScheme::spectral ? "spectral" : "centered";
}

std::string to_string(EtaInit k) {
  switch (k) {
    case EtaInit::flat: return "flat";
    case EtaInit::cosine: return "cosine";
    case EtaInit::random: return "random";
    case EtaInit::values: return "values";
  }
  return "flat";
}

std::string to_string(NuInit k) {
  return k == NuInit::steady ? "steady" : "values";
}

RunConfig parse_config(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ValidationError("config: key '" + section + "' outside a section");
    }
    const auto it = std::find_if(schema().begin(), schema().end(),
                                 [&](const auto& s) { return s.first == section; });
    if (it == schema().end()) {
      throw ValidationError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      const auto f = std::find_if(it->second.begin(), it->second.end(),
                                  [&](const auto& e) { return e.first == key; });
      if (f == it->second.end()) {
        throw ValidationError("config: unknown key " + section + "." + key);
      }
      f->second.read(cfg, section + "." + key, value.data());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path));
}

std::string serialize_config(const RunConfig& cfg) {
  return write_sections(cfg, {}, false);
}

void validate(const RunConfig& cfg) {
  validate(cfg.params);
  const GridSpec& g = cfg.grid;
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ValidationError("config: " + what);
  };
  require(g.n_transverse >= 4 && g.n_lower >= 4 && g.n_upper >= 4,
          "grid counts must be at least 4");
  require(g.dims == 1 || g.dims == 2, "grid.dims must be 1 or 2");
  require(std::isfinite(cfg.time.dt) && cfg.time.dt > 0.0, "dt must be positive");
  require(std::isfinite(cfg.time.t_end) && cfg.time.t_end > 0.0,
          "t_end must be positive");
  require(cfg.time.cfl > 0.0, "cfl must be positive");
  require(cfg.time.dt <= cfg.time.cfl / g.n_transverse * (1.0 + 1e-12),
          "dt exceeds cfl * dx");
  require(cfg.monitor.delta_j > 0.0 && cfg.monitor.delta_j < 1.0,
          "delta_j must lie in (0,1)");
  require(cfg.monitor.gamma_margin > 0.0 &&
              cfg.monitor.gamma_margin < std::min(cfg.params.H, 1.0 - cfg.params.H),
          "gamma_margin must lie in (0, min(H, 1-H))");
  require(cfg.solver.elliptic_tol > 0.0, "elliptic_tol must be positive");
  require(cfg.solver.elliptic_max_iter > 0 && cfg.solver.elliptic_restart > 0,
          "elliptic iteration limits must be positive");
  require(cfg.solver.max_principle_tol > 0.0,
          "max_principle_tol must be positive");
  require(cfg.output.every > 0, "output.every must be positive");
  require(cfg.output.snapshot_every >= 0, "output.snapshot_every must be >= 0");
  const std::size_t points =
      g.dims == 1 ? static_cast<std::size_t>(g.n_transverse)
                  : static_cast<std::size_t>(g.n_transverse) * g.n_transverse;
  const InitialSpec& ini = cfg.initial;
  require(std::isfinite(ini.eta_amplitude), "eta_amplitude must be finite");
  if (ini.eta_kind == EtaInit::values) {
    require(ini.eta_values.size() == points, "eta_values has the wrong length");
  }
  if (ini.nu_kind == NuInit::values) {
    require(ini.nu_values.size() == points * (g.n_upper + 1),
            "nu_values has the wrong length");
  }
}

std::string config_hash(const RunConfig& cfg) {
  return sha256_hex(write_sections(
      cfg, {"params", "grid", "time", "monitor", "solver"}, true));
}

PhysicalParams parse_physical(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("physical parameters: ") + e.what());
  }
  PhysicalParams p;
  const std::map<std::string, double*> keys = {
      {"porosity_m", &p.porosity_m},       {"permeability_k", &p.permeability_k},
      {"viscosity_w", &p.viscosity_w},     {"diffusivity_D", &p.diffusivity_D},
      {"density_w", &p.density_w},         {"density_a", &p.density_a},
      {"gravity_g", &p.gravity_g},         {"P_a", &p.P_a},
      {"P_c", &p.P_c},                     {"P_0", &p.P_0},
      {"nu_star", &p.nu_star},             {"nu_a", &p.nu_a},
      {"layer_L", &p.layer_L},             {"level_h", &p.level_h}};
  for (const auto& [section, body] : tree) {
    if (section != "physical") {
      throw ValidationError("physical parameters: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      const auto it = keys.find(key);
      if (it == keys.end()) {
        throw ValidationError("physical parameters: unknown key " + key);
      }
      *it->second = parse_double("physical." + key, value.data());
    }
  }
  return p;
}

Grid make_grid(const RunConfig& cfg) {
  return build_grid(cfg.grid.n_transverse, cfg.grid.n_lower, cfg.grid.n_upper,
                    cfg.params.H, cfg.grid.dims);
}

}  // namespace evapfront
