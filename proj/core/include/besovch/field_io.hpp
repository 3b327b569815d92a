#pragma once

#include <filesystem>
#include <iosfwd>

#include "besovch/grid.hpp"

namespace besovch {

// CSV layout: header "x,value", then one row per sample with 17 significant digits.
void write_field_csv(const Field& f, std::ostream& out);
void write_field_csv(const Field& f, const std::filesystem::path& path);
Field read_field_csv(const std::filesystem::path& path);

// Binary layout (little-endian): float64 L, uint64 n, then n float64 samples.
void write_field_binary(const Field& f, const std::filesystem::path& path);
Field read_field_binary(const std::filesystem::path& path);

// Dispatches on extension: ".csv" is CSV, anything else is the binary layout.
Field read_field(const std::filesystem::path& path);

}  // namespace besovch
