#include "besovch/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>

#include "besovch/error.hpp"

namespace besovch {
namespace {

static_assert(std::endian::native == std::endian::little, "binary field layout assumes a little-endian host");

std::string format_double(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view s, const std::filesystem::path& path, std::size_t line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

void ensure_parent(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory for " + path.string() + ": " + ec.message());
}

}  // namespace

void write_field_csv(const Field& f, std::ostream& out) {
  out << "x,value\n";
  const GridSpec& g = f.grid();
  for (std::size_t m = 0; m < g.n_points; ++m) {
    out << format_double(g.x(m)) << ',' << format_double(f[m]) << '\n';
  }
}

void write_field_csv(const Field& f, const std::filesystem::path& path) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_field_csv(f, out);
  if (!out) throw IoError("failed writing " + path.string());
}

Field read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> xs;
  RealVector values;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (lineno == 1 && line.rfind("x", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 'x,value'");
    xs.push_back(parse_double(std::string_view(line).substr(0, comma), path, lineno));
    values.push_back(parse_double(std::string_view(line).substr(comma + 1), path, lineno));
  }
  if (xs.size() < 2) throw IoError(path.string() + ": too few rows for a field");
  const GridSpec grid = make_grid(-xs.front(), xs.size());
  for (std::size_t m = 0; m < xs.size(); ++m) {
    if (std::abs(xs[m] - grid.x(m)) > 1e-9 * grid.length()) {
      throw IoError(path.string() + ": row " + std::to_string(m + 1) + " is not on a uniform grid starting at -L");
    }
  }
  return Field::from_samples(grid, std::move(values));
}

void write_field_binary(const Field& f, const std::filesystem::path& path) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const double L = f.grid().half_length;
  const std::uint64_t n = f.grid().n_points;
  out.write(reinterpret_cast<const char*>(&L), sizeof L);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(f.samples().data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!out) throw IoError("failed writing " + path.string());
}

Field read_field_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  double L = 0.0;
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&L), sizeof L);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in) throw IoError(path.string() + ": truncated header");
  const GridSpec grid = make_grid(L, static_cast<std::size_t>(n));
  RealVector samples(grid.n_points);
  in.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw IoError(path.string() + ": truncated sample block");
  return Field::from_samples(grid, std::move(samples));
}

Field read_field(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return read_field_csv(path);
  return read_field_binary(path);
}

}  // namespace besovch
