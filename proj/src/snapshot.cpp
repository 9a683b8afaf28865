#include "evapfront/snapshot.hpp"

#include <nlohmann/json.hpp>

#include "evapfront/errors.hpp"
#include "evapfront/io_util.hpp"

namespace evapfront {

namespace {

constexpr const char* kFormat = "evapfront-snapshot";
constexpr int kVersion = 1;

nlohmann::json field_json(const LayerField& f) {
  return {{"levels", f.levels()},
          {"points", f.points()},
          {"data", hex_encode(f.values())}};
}

LayerField field_from(const nlohmann::json& j) {
  LayerField f(j.at("levels").get<std::size_t>(), j.at("points").get<std::size_t>());
  const std::vector<double> v = hex_decode(j.at("data").get<std::string>());
  if (v.size() != f.values().size()) {
    throw ValidationError("snapshot: field payload has the wrong length");
  }
  std::copy(v.begin(), v.end(), f.values().begin());
  return f;
}

double scalar_from(const nlohmann::json& j) {
  const std::vector<double> v = hex_decode(j.get<std::string>());
  if (v.size() != 1) throw ValidationError("snapshot: malformed scalar");
  return v.front();
}

}  // namespace

std::string snapshot_json(const SimulationState& s, const RunConfig& cfg) {
  const double time[] = {s.interface.time};
  const double ftime[] = {s.fields.time};
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["config_hash"] = config_hash(cfg);
  j["encoding"] = "IEEE-754 binary64, big-endian hex, 16 digits per value";
  j["step"] = s.step;
  j["time"] = hex_encode(time);
  j["time_decimal"] = s.interface.time;
  j["eta"] = {{"points", s.interface.eta.size()},
              {"data", hex_encode(s.interface.eta)}};
  j["fields_time"] = hex_encode(ftime);
  j["pressure"] = field_json(s.fields.pressure);
  j["humidity"] = field_json(s.fields.humidity);
  return j.dump(1) + "\n";
}

SimulationState restore_json(const std::string& text, const RunConfig& cfg) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("snapshot: ") + e.what());
  }
  try {
    if (j.at("format") != kFormat || j.at("version") != kVersion) {
      throw ValidationError("snapshot: unknown format or version");
    }
    const std::string hash = config_hash(cfg);
    if (j.at("config_hash").get<std::string>() != hash) {
      throw ValidationError(
          "snapshot: configuration hash mismatch, refusing to restore");
    }
    SimulationState s;
    s.step = j.at("step").get<long long>();
    s.interface.time = scalar_from(j.at("time"));
    s.interface.eta = hex_decode(j.at("eta").at("data").get<std::string>());
    if (s.interface.eta.size() != j.at("eta").at("points").get<std::size_t>()) {
      throw ValidationError("snapshot: interface payload has the wrong length");
    }
    s.fields.time = scalar_from(j.at("fields_time"));
    s.fields.pressure = field_from(j.at("pressure"));
    s.fields.humidity = field_from(j.at("humidity"));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("snapshot: ") + e.what());
  }
}

void save_snapshot(const std::filesystem::path& path, const SimulationState& s,
                   const RunConfig& cfg) {
  atomic_write(path, snapshot_json(s, cfg));
}

SimulationState load_snapshot(const std::filesystem::path& path,
                              const RunConfig& cfg) {
  return restore_json(read_file(path), cfg);
}

}  // namespace evapfront
