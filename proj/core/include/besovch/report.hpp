#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "besovch/besov.hpp"
#include "besovch/counterexample.hpp"
#include "besovch/experiments.hpp"

namespace besovch {

/// Everything needed to rerun a command: the effective settings, code version and grid.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::string version;
  std::vector<std::pair<std::string, std::string>> grids;  // (label, "L=...,n=...")
  double wall_time_seconds = 0.0;
  std::vector<std::string> outputs;
  std::map<std::string, std::string> output_sha256;
};

std::string code_version();

/// Reports are serialized with shortest round-trip number formatting and sorted keys, so equal
/// inputs give byte-identical text.
std::string to_json(const NormReport& r);
std::string to_json(const ScalingReport& r);
std::string to_csv(const ScalingReport& r);
std::string to_json(const std::vector<HeavisideCalibration>& r);
std::string to_json(const std::vector<InflationRun>& runs);
std::string to_csv(const std::vector<InflationRun>& runs);
std::string to_json(const LinearizationReport& r);
std::string to_csv(const LinearizationReport& r);
std::string to_json(const EResidualReport& r);
std::string to_csv(const EResidualReport& r);
std::string to_json(const ControlReport& r);
std::string to_csv(const ControlReport& r);
std::string to_json(const RunManifest& m);

/// A combined report of whichever experiments were run.
struct ReportBundle {
  std::optional<ScalingReport> algebra;
  std::vector<HeavisideCalibration> calibration;
  std::vector<InflationRun> inflation;
  std::optional<LinearizationReport> linearization;
  std::optional<EResidualReport> e_residual;
  std::optional<ControlReport> control;
};

std::string to_json(const ReportBundle& b);
/// Long format: section,N,t,metric,value.
std::string to_csv(const ReportBundle& b);

/// Shortest round-trip decimal text of a double.
std::string format_number(double v);

std::string sha256_hex(std::string_view data);

/// Writes `content` to `path`, creating parent directories; IoError names the path.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace besovch
