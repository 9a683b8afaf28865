#pragma once

#include <filesystem>
#include <string>

#include "evapfront/config.hpp"
#include "evapfront/simulation.hpp"

namespace evapfront {

/// Self-describing JSON document with the state arrays as hex-encoded
/// IEEE-754 doubles and the hash of the producing configuration.
std::string snapshot_json(const SimulationState& state, const RunConfig& cfg);

/// Parses a snapshot and checks it against `cfg`: ValidationError on a
/// hash mismatch or malformed content.
SimulationState restore_json(const std::string& text, const RunConfig& cfg);

void save_snapshot(const std::filesystem::path& path,
                   const SimulationState& state, const RunConfig& cfg);
SimulationState load_snapshot(const std::filesystem::path& path,
                              const RunConfig& cfg);

}  // namespace evapfront
