// besovch: command line front end for the Besov / Camassa-Holm toolkit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "besovch/besov.hpp"
#include "besovch/ch_solver.hpp"
#include "besovch/config.hpp"
#include "besovch/counterexample.hpp"
#include "besovch/error.hpp"
#include "besovch/experiments.hpp"
#include "besovch/field_io.hpp"
#include "besovch/littlewood_paley.hpp"
#include "besovch/parallel.hpp"
#include "besovch/peakon.hpp"
#include "besovch/report.hpp"

namespace fs = std::filesystem;
using namespace besovch;

namespace {

using Clock = std::chrono::steady_clock;

template <class T>
inline constexpr bool is_vector = false;
template <class T>
inline constexpr bool is_vector<std::vector<T>> = true;

// Settings may come from flags or from a key=value file; explicit flags win.
class Settings {
 public:
  explicit Settings(CLI::App* app) : app_(app) {}

  template <class T>
  void add(const std::string& key, T& var, const std::string& help) {
    auto* opt = app_->add_option("--" + key, var, help)->capture_default_str();
    if constexpr (is_vector<T>) opt->delimiter(',');
    keys_.push_back(key);
    printers_.push_back([&var] { return to_text(var); });
    binders_.push_back([this, key, &var](const Config& cfg) {
      if (app_->get_option("--" + key)->count() > 0 || !cfg.has(key)) return;
      var = from_config<T>(cfg, key);
    });
  }

  void flag(const std::string& key, bool& var, const std::string& help) {
    app_->add_flag("--" + key, var, help);
    keys_.push_back(key);
    printers_.push_back([&var] { return std::string(var ? "true" : "false"); });
    binders_.push_back([this, key, &var](const Config& cfg) {
      if (app_->get_option("--" + key)->count() > 0 || !cfg.has(key)) return;
      var = cfg.get_bool(key, var);
    });
  }

  /// Applies the config file (if any) and echoes the effective settings.
  std::map<std::string, std::string> resolve(const std::string& config_path) {
    if (!config_path.empty()) {
      const Config cfg = Config::load(config_path);
      cfg.require_known(std::set<std::string>(keys_.begin(), keys_.end()));
      for (auto& b : binders_) b(cfg);
    }
    std::map<std::string, std::string> echo;
    for (std::size_t i = 0; i < keys_.size(); ++i) echo[keys_[i]] = printers_[i]();
    return echo;
  }

 private:
  template <class T>
  static std::string to_text(const T& v) {
    if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else if constexpr (std::is_floating_point_v<T>) {
      return format_number(v);
    } else if constexpr (std::is_integral_v<T>) {
      return std::to_string(v);
    } else {
      std::string out;
      for (const auto& x : v) out += (out.empty() ? "" : ",") + to_text(x);
      return out;
    }
  }

  template <class T>
  static T from_config(const Config& cfg, const std::string& key) {
    if constexpr (std::is_same_v<T, std::vector<int>>) {
      return cfg.get_int_list(key, {});
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      return cfg.get_double_list(key, {});
    } else if constexpr (std::is_same_v<T, std::string>) {
      return cfg.get_string(key, {});
    } else if constexpr (std::is_floating_point_v<T>) {
      return cfg.get_double(key, 0.0);
    } else {
      const long long v = cfg.get_int(key, 0);
      if (v < 0 && std::is_unsigned_v<T>) throw ConfigError(key, "must be non-negative");
      return static_cast<T>(v);
    }
  }

  CLI::App* app_;
  std::vector<std::string> keys_;
  std::vector<std::function<void(const Config&)>> binders_;
  std::vector<std::function<std::string()>> printers_;
};

std::string grid_text(const GridSpec& g) {
  return "L=" + format_number(g.half_length) + ",n=" + std::to_string(g.n_points);
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    write_text_file(output, text);
  }
}

// Writes report files plus a manifest (the manifest carries wall time, reports do not).
void finish(const fs::path& dir, const std::string& command, const std::map<std::string, std::string>& echo,
            const std::vector<std::pair<std::string, std::string>>& files,
            const std::vector<std::pair<std::string, std::string>>& grids, Clock::time_point start,
            const std::vector<std::string>& extra_outputs = {}) {
  RunManifest m;
  m.command = command;
  m.config = echo;
  m.version = code_version();
  m.grids = grids;
  for (const auto& [name, content] : files) {
    const fs::path p = dir / name;
    write_text_file(p, content);
    m.outputs.push_back(p.string());
    m.output_sha256[p.string()] = sha256_hex(content);
  }
  for (const auto& p : extra_outputs) m.outputs.push_back(p);
  m.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  write_text_file(dir / (command + "_manifest.json"), to_json(m));
  for (const auto& [name, content] : files) std::cerr << "wrote " << (dir / name).string() << "\n";
}

EvolutionConfig evolution_config(double cfl, double steps, std::size_t records, double threshold, std::size_t spw,
                                 int grid_offset, double budget) {
  EvolutionConfig c;
  c.grid_offset = grid_offset;
  c.wall_budget_seconds = budget;
  c.cfl = cfl;
  c.steps_per_window = steps;
  c.records = records;
  c.breaking_threshold = threshold;
  c.sampling.samples_per_wavelength = spw;
  c.validate();
  return c;
}

struct EvolutionFlags {
  double cfl = 0.4;
  double steps = 200.0;
  std::size_t records = 16;
  double threshold = 1e3;
  std::size_t spw = 32;
  int grid_offset = 9;
  double budget = 0.0;

  void add(Settings& s) {
    s.add("grid-offset", grid_offset, "counterexample runs evolve on 2^(N+offset) points");
    s.add("wall-budget", budget, "seconds allowed per evolution (0: unlimited)");
    s.add("cfl", cfl, "CFL number");
    s.add("steps-per-window", steps, "time steps across the evolution window");
    s.add("records", records, "diagnostic records per window");
    s.add("breaking-threshold", threshold, "stop when min u_x < -threshold");
    s.add("samples-per-wavelength", spw, "block sup-norm sampling density");
  }
  EvolutionConfig config() const { return evolution_config(cfl, steps, records, threshold, spw, grid_offset, budget); }
};

Field initial_field(const std::string& init, const std::string& input, std::size_t n_points, double half_length,
                    std::vector<std::pair<std::string, std::string>>& grids) {
  if (init == "file" || init.rfind("file:", 0) == 0) {
    const std::string path = init == "file" ? input : init.substr(5);
    if (path.empty()) throw InvalidArgument("--init file needs --input PATH (or file:PATH)");
    Field f = read_field(path);
    grids.emplace_back("input", grid_text(f.grid()));
    return f;
  }
  if (init.rfind("counterexample:", 0) == 0) {
    const int N = std::stoi(init.substr(15));
    if (N > kMaxEvolutionN) throw CapacityError("counterexample evolution supports N <= 12");
    const auto params = CounterexampleParams::standard(N);
    grids.emplace_back("counterexample", grid_text(params.grid));
    return build_u0(params);
  }
  const GridSpec grid = make_grid(half_length, n_points);
  grids.emplace_back(init, grid_text(grid));
  if (init == "peakon") {
    return peakon_field(PeakonState{{1.0}, {0.0}, 0.0}, grid, 4.0 * grid.dx());
  }
  if (init == "bump") return gaussian_bump(0.5, 1.0, grid);
  throw InvalidArgument("unknown --init '" + init + "' (file, peakon, counterexample:N, bump)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Littlewood-Paley analysis, Besov norms and Camassa-Holm experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", code_version());
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value settings file (keys are the long option names)")
      ->check(CLI::ExistingFile);
  const auto start = Clock::now();

  // decompose
  auto* dec = app.add_subcommand("decompose", "per-block sup and L2 norms of a field (CSV)");
  std::string dec_in, dec_out;
  dec->add_option("input", dec_in, "field file (.csv or binary)")->required();
  dec->add_option("-o,--output", dec_out, "output CSV (default stdout)");

  // besov-norm
  auto* bn = app.add_subcommand("besov-norm", "Besov norm of a field (JSON)");
  std::string bn_in, bn_out, bn_p = "inf", bn_r = "1";
  double bn_s = 0.0;
  bool bn_log = false, bn_full = false;
  bn->add_option("input", bn_in, "field file")->required();
  bn->add_option("--s", bn_s, "regularity s");
  bn->add_option("--p", bn_p, "integrability 1, 2 or inf");
  bn->add_option("--r", bn_r, "summability 1, 2 or inf");
  bn->add_flag("--log-weight", bn_log, "logarithmic norm sup_j max(j,1) 2^{js} |Delta_j f|_p (needs --r inf)");
  bn->add_flag("--full-grid", bn_full, "evaluate block sup norms on every grid point");
  bn->add_option("-o,--output", bn_out, "output JSON (default stdout)");

  // solve
  auto* sv = app.add_subcommand("solve", "evolve the Camassa-Holm equation");
  Settings sv_set(sv);
  std::string sv_init = "bump", sv_input, sv_out = "solve_out";
  double sv_tend = 1.0, sv_cfl = 0.4, sv_half = 16.0, sv_speed = 1.0, sv_maxdt = 0.0, sv_thr = 1e3;
  std::size_t sv_every = 100, sv_n = 4096;
  bool sv_no_besov = false;
  sv_set.add("init", sv_init, "file | file:PATH | peakon | counterexample:N | bump");
  sv_set.add("input", sv_input, "field file for --init file");
  sv_set.add("t-end", sv_tend, "final time");
  sv_set.add("cfl", sv_cfl, "CFL number");
  sv_set.add("record-every", sv_every, "record every this many steps");
  sv_set.add("n-points", sv_n, "grid size for peakon/bump");
  sv_set.add("half-length", sv_half, "domain half length L for peakon/bump");
  sv_set.add("speed-floor", sv_speed, "dt = cfl dx / max(speed-floor, max|u|)");
  sv_set.add("max-dt", sv_maxdt, "upper bound on dt (0: none)");
  sv_set.add("breaking-threshold", sv_thr, "stop when min u_x < -threshold");
  sv_set.flag("no-besov", sv_no_besov, "skip ||u||_{B^1_{inf,1}} in the diagnostics");
  sv_set.add("out", sv_out, "output directory");

  // peakon
  auto* pk = app.add_subcommand("peakon", "integrate the multipeakon ODE (CSV t,p_i,q_i)");
  Settings pk_set(pk);
  std::vector<double> pk_p{1.0, 0.5}, pk_q{-5.0, 0.0};
  double pk_tend = 5.0, pk_dt = 1e-3;
  std::size_t pk_every = 100;
  std::string pk_out;
  pk_set.add("p", pk_p, "amplitudes");
  pk_set.add("q", pk_q, "positions");
  pk_set.add("t-end", pk_tend, "final time");
  pk_set.add("dt", pk_dt, "RK4 step");
  pk_set.add("record-every", pk_every, "rows every this many steps");
  pk_set.add("output", pk_out, "output CSV (default stdout)");

  // counterexample / algebra
  auto* cx = app.add_subcommand("counterexample", "static scaling of the ill-posedness data");
  auto* al = app.add_subcommand("algebra", "Banach-algebra failure of B^0_{inf,1} (static ladder)");
  std::vector<int> cx_n{10, 12, 14, 16, 18};
  std::string cx_out = "counterexample_out";
  std::size_t cx_spw = 32;
  bool cx_dump = false;
  Settings cx_set(cx), al_set(al);
  for (Settings* s : {&cx_set, &al_set}) {
    s->add("n-list", cx_n, "N ladder");
    s->add("samples-per-wavelength", cx_spw, "block sup-norm sampling density");
    s->add("out", cx_out, "output directory");
  }
  cx_set.flag("dump-fields", cx_dump, "also write u0 and E0 as binary fields (N <= 14)");

  // inflate
  auto* inf = app.add_subcommand("inflate", "norm inflation along the flow");
  Settings inf_set(inf);
  std::vector<int> inf_n{8, 10, 12};
  std::string inf_out = "inflate_out";
  EvolutionFlags inf_ev;
  inf_set.add("n", inf_n, "N ladder (N <= 12)");
  inf_ev.add(inf_set);
  inf_set.add("out", inf_out, "output directory");

  // linearize
  auto* lin = app.add_subcommand("linearize", "compare u(t) with u0 + t E0");
  Settings lin_set(lin);
  int lin_n = 10;
  std::vector<double> lin_t{1e-4, 1e-3, 1e-2};
  std::string lin_out = "linearize_out";
  EvolutionFlags lin_ev;
  lin_set.add("n", lin_n, "N");
  lin_set.add("t", lin_t, "times");
  lin_ev.add(lin_set);
  lin_set.add("out", lin_out, "output directory");

  // e-residual
  auto* er = app.add_subcommand("e-residual", "residual of the transported-E equation");
  Settings er_set(er);
  int er_n = 10;
  std::string er_out = "e_residual_out";
  EvolutionFlags er_ev;
  er_ev.steps = 400.0;
  er_set.add("n", er_n, "N");
  er_ev.add(er_set);
  er_set.add("out", er_out, "output directory");

  // control
  auto* ct = app.add_subcommand("control", "no-inflation run for a smooth bump");
  Settings ct_set(ct);
  double ct_amp = 0.5, ct_width = 1.0, ct_factor = 1.0;
  std::string ct_out = "control_out";
  EvolutionFlags ct_ev;
  ct_set.add("amp", ct_amp, "bump amplitude");
  ct_set.add("width", ct_width, "bump width");
  ct_set.add("window-factor", ct_factor, "window = factor / (4 ||u0||_{C^{0,1}})");
  ct_ev.add(ct_set);
  ct_set.add("out", ct_out, "output directory");

  // report
  auto* rp = app.add_subcommand("report", "run a suite of experiments into one report");
  Settings rp_set(rp);
  std::string rp_format = "json", rp_out = "report_out";
  std::vector<std::string> rp_suite{"algebra", "calibration"};
  std::vector<int> rp_alg_n{10, 12, 14}, rp_inf_n{8, 10};
  int rp_lin_n = 10, rp_er_n = 10;
  EvolutionFlags rp_ev;
  rp->add_option("--format", rp_format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  rp->add_option("--suite", rp_suite, "algebra, calibration, inflate, linearize, e-residual, control")
      ->delimiter(',')
      ->capture_default_str();
  rp_set.add("algebra-n", rp_alg_n, "N ladder for algebra");
  rp_set.add("inflate-n", rp_inf_n, "N ladder for inflate");
  rp_set.add("linearize-n", rp_lin_n, "N for linearize");
  rp_set.add("e-residual-n", rp_er_n, "N for e-residual");
  rp_ev.add(rp_set);
  rp_set.add("out", rp_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (dec->parsed()) {
      const Field f = read_field(dec_in);
      const FilterBank bank(f.grid());
      BlockNormEvaluator ev(bank);
      const auto linf = ev.norms(f.spectrum(), LpExponent::infinity);
      const auto l2 = ev.norms(f.spectrum(), LpExponent::two);
      std::ostringstream out;
      out << "j,block_Linf,block_L2\n";
      for (std::size_t i = 0; i < linf.size(); ++i) {
        out << static_cast<int>(i) - 1 << ',' << format_number(linf[i]) << ',' << format_number(l2[i]) << '\n';
      }
      emit(out.str(), dec_out);
    } else if (bn->parsed()) {
      const Field f = read_field(bn_in);
      BesovSpec spec{bn_s, parse_lp_exponent(bn_p), parse_lp_exponent(bn_r), bn_log};
      BlockSampling sampling;
      sampling.full_grid = bn_full;
      emit(to_json(besov_norm(f, spec, FilterBank(f.grid()), sampling)), bn_out);
    } else if (sv->parsed()) {
      const auto echo = sv_set.resolve(config_path);
      std::vector<std::pair<std::string, std::string>> grids;
      const Field u0 = initial_field(sv_init, sv_input, sv_n, sv_half, grids);
      SolveConfig cfg;
      cfg.t_end = sv_tend;
      cfg.cfl = sv_cfl;
      cfg.record_every = sv_every;
      cfg.speed_floor = sv_speed;
      if (sv_maxdt > 0.0) cfg.max_dt = sv_maxdt;
      cfg.breaking_threshold = sv_thr;
      cfg.besov_diagnostics = !sv_no_besov;
      cfg.keep_states = false;
      const fs::path dir = sv_out;
      std::ostringstream diag;
      diag << "t,h1,min_ux,b1inf1\n";
      std::vector<std::string> fields;
      std::size_t index = 0;
      const Trajectory traj = solve(u0, cfg, [&](const SolverState& s) {
        char name[64];
        std::snprintf(name, sizeof name, "fields/record_%05zu.bin", index++);
        write_field_binary(s.u, dir / name);
        fields.push_back((dir / name).string());
        diag << format_number(s.t) << ',' << format_number(s.diagnostics.h1_energy) << ','
             << format_number(s.diagnostics.min_ux) << ','
             << (s.diagnostics.besov_b1_inf_1 ? format_number(*s.diagnostics.besov_b1_inf_1) : std::string("nan"))
             << '\n';
      });
      std::ostringstream summary;
      summary << "{\n  \"records\": " << index << ",\n  \"steps\": " << traj.steps << ",\n  \"broke_at\": "
              << (traj.broke_at ? format_number(*traj.broke_at) : std::string("null")) << "\n}\n";
      finish(dir, "solve", echo, {{"diagnostics.csv", diag.str()}, {"trajectory.json", summary.str()}}, grids, start,
             fields);
    } else if (pk->parsed()) {
      pk_set.resolve(config_path);
      const auto states = integrate_peakons(PeakonState{pk_p, pk_q, 0.0}, pk_tend, pk_dt, pk_every);
      std::ostringstream out;
      out << 't';
      for (std::size_t i = 0; i < pk_p.size(); ++i) out << ",p_" << i + 1;
      for (std::size_t i = 0; i < pk_q.size(); ++i) out << ",q_" << i + 1;
      out << '\n';
      for (const auto& s : states) {
        out << format_number(s.t);
        for (double v : s.p) out << ',' << format_number(v);
        for (double v : s.q) out << ',' << format_number(v);
        out << '\n';
      }
      emit(out.str(), pk_out);
    } else if (cx->parsed() || al->parsed()) {
      const bool is_cx = cx->parsed();
      const auto echo = (is_cx ? cx_set : al_set).resolve(config_path);
      ScalingOptions opts;
      opts.sampling.samples_per_wavelength = cx_spw;
      const ScalingReport rep = algebra_failure_experiment(cx_n, opts);
      std::vector<HeavisideCalibration> cal;
      for (int N : cx_n) cal.push_back(heaviside_calibration(N, opts.sampling));
      std::vector<std::pair<std::string, std::string>> grids;
      for (int N : cx_n) grids.emplace_back("N=" + std::to_string(N), grid_text(CounterexampleParams::standard(N).grid));
      const fs::path dir = cx_out;
      std::vector<std::string> dumps;
      if (is_cx && cx_dump) {
        for (int N : cx_n) {
          if (N > 14) continue;
          const Field u0 = build_u0(CounterexampleParams::standard(N));
          const auto p0 = dir / ("fields/u0_N" + std::to_string(N) + ".bin");
          const auto p1 = dir / ("fields/E0_N" + std::to_string(N) + ".bin");
          write_field_binary(u0, p0);
          write_field_binary(build_E0(u0), p1);
          dumps.push_back(p0.string());
          dumps.push_back(p1.string());
        }
      }
      const std::string stem = is_cx ? "scaling" : "algebra";
      finish(dir, is_cx ? "counterexample" : "algebra", echo,
             {{stem + ".json", to_json(rep)}, {stem + ".csv", to_csv(rep)}, {"calibration.json", to_json(cal)}}, grids,
             start, dumps);
    } else if (inf->parsed()) {
      const auto echo = inf_set.resolve(config_path);
      const EvolutionConfig cfg = inf_ev.config();
      const auto runs = parallel_map(inf_n, [&](int N) { return inflation_experiment(N, cfg); });
      std::vector<std::pair<std::string, std::string>> grids;
      for (int N : inf_n) grids.emplace_back("N=" + std::to_string(N), grid_text(CounterexampleParams::standard(N).grid));
      finish(inf_out, "inflate", echo, {{"inflation.json", to_json(runs)}, {"inflation.csv", to_csv(runs)}}, grids,
             start);
    } else if (lin->parsed()) {
      const auto echo = lin_set.resolve(config_path);
      const auto rep = early_time_linearization(lin_n, lin_t, lin_ev.config());
      finish(lin_out, "linearize", echo, {{"linearization.json", to_json(rep)}, {"linearization.csv", to_csv(rep)}},
             {{"N=" + std::to_string(lin_n), grid_text(CounterexampleParams::standard(lin_n).grid)}}, start);
    } else if (er->parsed()) {
      const auto echo = er_set.resolve(config_path);
      const auto rep = e_transport_residual(er_n, er_ev.config());
      finish(er_out, "e-residual", echo, {{"e_residual.json", to_json(rep)}, {"e_residual.csv", to_csv(rep)}},
             {{"N=" + std::to_string(er_n), grid_text(CounterexampleParams::standard(er_n).grid)}}, start);
    } else if (ct->parsed()) {
      const auto echo = ct_set.resolve(config_path);
      const auto rep = no_inflation_experiment(ct_amp, ct_width, ct_ev.config(), ct_factor);
      finish(ct_out, "control", echo, {{"control.json", to_json(rep)}, {"control.csv", to_csv(rep)}},
             {{"control", grid_text(control_grid())}}, start);
    } else if (rp->parsed()) {
      auto echo = rp_set.resolve(config_path);
      echo["format"] = rp_format;
      std::string suite_text;
      for (const auto& s : rp_suite) suite_text += (suite_text.empty() ? "" : ",") + s;
      echo["suite"] = suite_text;
      const EvolutionConfig cfg = rp_ev.config();
      ReportBundle bundle;
      for (const auto& item : rp_suite) {
        if (item == "algebra") {
          bundle.algebra = algebra_failure_experiment(rp_alg_n);
        } else if (item == "calibration") {
          for (int N : rp_alg_n) bundle.calibration.push_back(heaviside_calibration(N));
        } else if (item == "inflate") {
          bundle.inflation = parallel_map(rp_inf_n, [&](int N) { return inflation_experiment(N, cfg); });
        } else if (item == "linearize") {
          bundle.linearization = early_time_linearization(rp_lin_n, {1e-4, 1e-3, 1e-2}, cfg);
        } else if (item == "e-residual") {
          bundle.e_residual = e_transport_residual(rp_er_n, cfg);
        } else if (item == "control") {
          bundle.control = no_inflation_experiment(0.5, 1.0, cfg);
        } else {
          throw InvalidArgument("unknown suite entry '" + item + "'");
        }
      }
      const std::string name = "report." + rp_format;
      finish(rp_out, "report", echo, {{name, rp_format == "json" ? to_json(bundle) : to_csv(bundle)}}, {}, start);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
