#include "besovch/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "besovch/error.hpp"

#ifndef BESOVCH_VERSION
#define BESOVCH_VERSION "0.0.0"
#endif

namespace besovch {

using json = nlohmann::json;

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json fit_json(const SlopeFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"rms_residual", f.rms_residual}};
}

json record_json(const ScalingRecord& r) {
  return {{"N", r.N},
          {"n_points", r.n_points},
          {"u0_b1_inf_1", r.u0_b1_inf_1},
          {"u0_log_b1", r.u0_log_b1},
          {"u0x_b0", r.u0x_b0},
          {"u0x2_b0", r.u0x2_b0},
          {"algebra_ratio", r.algebra_ratio},
          {"e0_b1_inf_1", r.e0_b1_inf_1},
          {"active_blocks", {r.active_j_min, r.active_j_max}}};
}

json scaling_json(const ScalingReport& r) {
  json rec = json::array();
  for (const auto& x : r.records) rec.push_back(record_json(x));
  return {{"records", rec},
          {"slopes",
           {{"u0_b1_inf_1", fit_json(r.u0_b1_inf_1)},
            {"u0_log_b1", fit_json(r.u0_log_b1)},
            {"u0x_b0", fit_json(r.u0x_b0)},
            {"u0x2_b0", fit_json(r.u0x2_b0)},
            {"algebra_ratio", fit_json(r.algebra_ratio)},
            {"e0_b1_inf_1", fit_json(r.e0_b1_inf_1)}}}};
}

json calibration_json(const std::vector<HeavisideCalibration>& cal) {
  json out = json::array();
  for (const auto& c : cal) {
    out.push_back({{"N", c.N}, {"snh_b0", c.snh_b0}, {"per_n", c.per_n}, {"h_blocks_inf", c.h_blocks}});
  }
  return out;
}

json sample_json(const InflationSample& s) {
  return {{"t", s.t}, {"u_b1", s.u_b1}, {"ux_b0", s.ux_b0}, {"lipschitz", s.lipschitz}, {"h1", s.h1}};
}

json run_json(const InflationRun& r) {
  json hist = json::array();
  for (const auto& s : r.history) hist.push_back(sample_json(s));
  json out = {{"N", r.N},
              {"n_points", r.n_points},
              {"T_bar", r.T_bar},
              {"amplification", r.amplification},
              {"ux_growth_at_half", r.ux_growth_at_half},
              {"broke", r.broke},
              {"steps", r.steps},
              {"history", hist}};
  out["broke_at"] = r.broke_at ? json(*r.broke_at) : json(nullptr);
  return out;
}

json linearization_json(const LinearizationReport& r) {
  json s = json::array();
  for (const auto& x : r.samples) s.push_back({{"t", x.t}, {"r", x.r}, {"r_full", x.r_full}});
  return {{"N", r.N}, {"e0_b1", r.e0_b1}, {"r_limit", r.r_limit}, {"samples", s}};
}

json residual_json(const EResidualReport& r) {
  json ladder = json::array();
  for (const auto& x : r.ladder) ladder.push_back({{"t", x.t}, {"delta", x.delta}, {"residual_norm", x.residual_norm}});
  json g = json::array();
  for (const auto& x : r.g_ratio) {
    g.push_back({{"t", x.t}, {"g_b1", x.g_b1}, {"lipschitz", x.lipschitz}, {"u_b1", x.u_b1}, {"ratio", x.ratio}});
  }
  return {{"N", r.N},
          {"t_center", r.t_center},
          {"ladder", ladder},
          {"order", r.order},
          {"coarse", r.coarse},
          {"g_ratio", g},
          {"g_ratio_mean", r.g_ratio_mean},
          {"g_ratio_max_deviation", r.g_ratio_max_deviation}};
}

json control_json(const ControlReport& r) {
  return {{"amplitude", r.amplitude}, {"width", r.width}, {"window", r.window},
          {"K", r.K},                 {"broke", r.broke}, {"run", run_json(r.run)}};
}

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> header) {
    bool first = true;
    for (auto h : header) {
      if (!first) out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }
  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((cell(cells, first)), ...);
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  template <class T>
  void cell(const T& v, bool& first) {
    if (!first) out_ << ',';
    first = false;
    if constexpr (std::is_floating_point_v<T>) {
      out_ << format_number(v);
    } else {
      out_ << v;
    }
  }
  std::ostringstream out_;
};

}  // namespace

std::string code_version() { return BESOVCH_VERSION; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string to_json(const NormReport& r) {
  json blocks = json::array();
  for (const auto& [j, c] : r.per_block) blocks.push_back({{"j", j}, {"value", c}});
  return dump({{"value", r.value}, {"per_block", blocks}});
}

std::string to_json(const ScalingReport& r) { return dump(scaling_json(r)); }

std::string to_csv(const ScalingReport& r) {
  CsvWriter w({"N", "n_points", "u0_b1_inf_1", "u0_log_b1", "u0x_b0", "u0x2_b0", "algebra_ratio", "e0_b1_inf_1",
               "active_j_min", "active_j_max"});
  for (const auto& x : r.records) {
    w.row(x.N, x.n_points, x.u0_b1_inf_1, x.u0_log_b1, x.u0x_b0, x.u0x2_b0, x.algebra_ratio, x.e0_b1_inf_1,
          x.active_j_min, x.active_j_max);
  }
  return w.str();
}

std::string to_json(const std::vector<HeavisideCalibration>& r) { return dump(calibration_json(r)); }

std::string to_json(const std::vector<InflationRun>& runs) {
  json out = json::array();
  for (const auto& r : runs) out.push_back(run_json(r));
  return dump(out);
}

std::string to_csv(const std::vector<InflationRun>& runs) {
  CsvWriter w({"N", "t", "u_b1", "ux_b0", "lipschitz", "h1"});
  for (const auto& r : runs) {
    for (const auto& s : r.history) w.row(r.N, s.t, s.u_b1, s.ux_b0, s.lipschitz, s.h1);
  }
  return w.str();
}

std::string to_json(const LinearizationReport& r) { return dump(linearization_json(r)); }

std::string to_csv(const LinearizationReport& r) {
  CsvWriter w({"N", "t", "r", "r_full"});
  for (const auto& s : r.samples) w.row(r.N, s.t, s.r, s.r_full);
  return w.str();
}

std::string to_json(const EResidualReport& r) { return dump(residual_json(r)); }

std::string to_csv(const EResidualReport& r) {
  CsvWriter w({"N", "t", "delta", "residual_norm"});
  for (const auto& s : r.ladder) w.row(r.N, s.t, s.delta, s.residual_norm);
  return w.str();
}

std::string to_json(const ControlReport& r) { return dump(control_json(r)); }

std::string to_csv(const ControlReport& r) { return to_csv(std::vector<InflationRun>{r.run}); }

std::string to_json(const RunManifest& m) {
  json grids = json::array();
  for (const auto& [label, g] : m.grids) grids.push_back({{"label", label}, {"grid", g}});
  return dump({{"command", m.command},
               {"config", m.config},
               {"version", m.version},
               {"grids", grids},
               {"wall_time_seconds", m.wall_time_seconds},
               {"outputs", m.outputs},
               {"output_sha256", m.output_sha256}});
}

std::string to_json(const ReportBundle& b) {
  json out = json::object();
  if (b.algebra) out["algebra"] = scaling_json(*b.algebra);
  if (!b.calibration.empty()) out["calibration"] = calibration_json(b.calibration);
  if (!b.inflation.empty()) {
    json runs = json::array();
    for (const auto& r : b.inflation) runs.push_back(run_json(r));
    out["inflation"] = runs;
  }
  if (b.linearization) out["linearization"] = linearization_json(*b.linearization);
  if (b.e_residual) out["e_residual"] = residual_json(*b.e_residual);
  if (b.control) out["control"] = control_json(*b.control);
  out["version"] = code_version();
  return dump(out);
}

std::string to_csv(const ReportBundle& b) {
  CsvWriter w({"section", "N", "t", "metric", "value"});
  const std::string none;
  if (b.algebra) {
    for (const auto& r : b.algebra->records) {
      w.row("algebra", r.N, none, "u0_b1_inf_1", r.u0_b1_inf_1);
      w.row("algebra", r.N, none, "u0_log_b1", r.u0_log_b1);
      w.row("algebra", r.N, none, "u0x_b0", r.u0x_b0);
      w.row("algebra", r.N, none, "u0x2_b0", r.u0x2_b0);
      w.row("algebra", r.N, none, "algebra_ratio", r.algebra_ratio);
      w.row("algebra", r.N, none, "e0_b1_inf_1", r.e0_b1_inf_1);
    }
    w.row("algebra", none, none, "slope_u0x_b0", b.algebra->u0x_b0.slope);
    w.row("algebra", none, none, "slope_u0x2_b0", b.algebra->u0x2_b0.slope);
    w.row("algebra", none, none, "slope_u0_log_b1", b.algebra->u0_log_b1.slope);
    w.row("algebra", none, none, "slope_u0_b1_inf_1", b.algebra->u0_b1_inf_1.slope);
  }
  for (const auto& c : b.calibration) w.row("calibration", c.N, none, "snh_b0_per_n", c.per_n);
  for (const auto& r : b.inflation) {
    for (const auto& s : r.history) w.row("inflation", r.N, s.t, "u_b1", s.u_b1);
    w.row("inflation", r.N, none, "amplification", r.amplification);
    w.row("inflation", r.N, none, "ux_growth_at_half", r.ux_growth_at_half);
  }
  if (b.linearization) {
    for (const auto& s : b.linearization->samples) w.row("linearization", b.linearization->N, s.t, "r", s.r);
    w.row("linearization", b.linearization->N, none, "r_limit", b.linearization->r_limit);
  }
  if (b.e_residual) {
    for (const auto& s : b.e_residual->ladder) {
      w.row("e_residual", b.e_residual->N, s.delta, "residual_norm", s.residual_norm);
    }
    w.row("e_residual", b.e_residual->N, none, "order", b.e_residual->order);
    w.row("e_residual", b.e_residual->N, none, "g_ratio_max_deviation", b.e_residual->g_ratio_max_deviation);
  }
  if (b.control) {
    w.row("control", none, none, "K", b.control->K);
    w.row("control", none, none, "window", b.control->window);
  }
  return w.str();
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace besovch
