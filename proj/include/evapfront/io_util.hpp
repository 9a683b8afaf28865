#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evapfront {

/// Writes `content` to a temporary sibling and renames it over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// IEEE-754 bit patterns as 16 lower-case hex digits per value.
std::string hex_encode(std::span<const double> values);
std::vector<double> hex_decode(std::string_view hex);

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

}  // namespace evapfront
