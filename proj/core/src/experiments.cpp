#include "besovch/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "besovch/besov.hpp"
#include "besovch/error.hpp"

namespace besovch {

void EvolutionConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidArgument("cfl must lie in (0, 1]");
  if (!(steps_per_window >= 1.0) || !std::isfinite(steps_per_window)) {
    throw InvalidArgument("steps_per_window must be >= 1");
  }
  if (!(breaking_threshold > 0.0)) throw InvalidArgument("breaking_threshold must be positive");
  if (records < 1) throw InvalidArgument("records must be >= 1");
  if (!(wall_budget_seconds >= 0.0)) throw InvalidArgument("wall_budget_seconds must be >= 0");
  if (grid_offset < 7 || grid_offset > 11) throw InvalidArgument("grid_offset must lie in [7, 11]");
}

namespace {

const Multiplier& dx_multiplier() {
  static const Multiplier m = [](double xi) { return cplx{0.0, xi}; };
  return m;
}

InflationSample sample_of(double t, const Field& u, BlockNormEvaluator& ev) {
  InflationSample s;
  s.t = t;
  s.u_b1 = besov_norm(u.spectrum(), BesovSpec::b1_inf_1(), ev).value;
  s.ux_b0 = besov_norm(u.spectrum(), BesovSpec::b0_inf_1(), ev, &dx_multiplier()).value;
  s.lipschitz = lipschitz_norm(u);
  s.h1 = h1_energy(u);
  return s;
}

SolveConfig solve_config(const EvolutionConfig& cfg, double t_end) {
  SolveConfig sc;
  sc.cfl = cfg.cfl;
  sc.t_end = t_end;
  sc.breaking_threshold = cfg.breaking_threshold;
  sc.record_every = 0;
  // The step is set by accuracy over the window; the advective CFL bound is far looser here
  // because |u| is tiny compared to the grid's wavenumbers.
  sc.speed_floor = 0.0;
  sc.max_dt = t_end / cfg.steps_per_window;
  sc.keep_states = false;
  if (cfg.wall_budget_seconds > 0.0) {
    sc.deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(cfg.wall_budget_seconds));
  }
  return sc;
}

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

// Fields on a grid of twice the resolution, for alias-free cubic products.
class Refined {
 public:
  explicit Refined(const GridSpec& coarse) : coarse_(coarse), fine_(make_grid(coarse.half_length, 2 * coarse.n_points)) {}

  Field up(const Field& f) const {
    ComplexVector s(fine_.spectrum_size());
    const std::size_t half = coarse_.n_points / 2;
    for (std::size_t k = 0; k < half; ++k) s[k] = f.spectrum()[k];
    s[half] = 0.5 * f.spectrum()[half];
    return Field::from_spectrum(fine_, std::move(s));
  }

  Field down(const Field& f) const {
    ComplexVector s(coarse_.spectrum_size());
    const std::size_t half = coarse_.n_points / 2;
    for (std::size_t k = 0; k < half; ++k) s[k] = f.spectrum()[k];
    return Field::from_spectrum(coarse_, std::move(s));
  }

 private:
  GridSpec coarse_;
  GridSpec fine_;
};

Field mul(const Field& a, const Field& b) { return product(a, b, false); }

}  // namespace

InflationRun evolve_with_diagnostics(const Field& u0, double t_end, const EvolutionConfig& cfg,
                                     std::vector<double> extra_times, std::size_t analysis_points) {
  cfg.validate();
  if (analysis_points == 0) analysis_points = u0.size();
  if (analysis_points < u0.size()) throw InvalidArgument("analysis grid must not be coarser than the evolution grid");
  if (!(t_end > 0.0)) throw InvalidArgument("evolution window must be positive");
  SolveConfig sc = solve_config(cfg, t_end);
  for (std::size_t k = 1; k < cfg.records; ++k) {
    sc.record_times.push_back(t_end * static_cast<double>(k) / static_cast<double>(cfg.records));
  }
  for (double t : extra_times) sc.record_times.push_back(t);

  const FilterBank bank(make_grid(u0.grid().half_length, analysis_points));
  BlockNormEvaluator ev(bank, cfg.sampling);
  InflationRun run;
  run.n_points = u0.grid().n_points;
  const Trajectory traj = solve(u0, sc, [&](const SolverState& s) {
    run.history.push_back(sample_of(s.t, resample(s.u, analysis_points), ev));
  });
  run.steps = traj.steps;
  run.broke = traj.broke_at.has_value();
  run.broke_at = traj.broke_at;
  const double base = run.history.front().u_b1;
  double top = base;
  for (const auto& h : run.history) top = std::max(top, h.u_b1);
  run.amplification = base > 0.0 ? top / base : 1.0;
  return run;
}

Field evolution_datum(int N, const EvolutionConfig& cfg) {
  cfg.validate();
  if (N > kMaxEvolutionN) throw CapacityError("evolution runs support N <= " + std::to_string(kMaxEvolutionN));
  const Field u0 = build_u0(CounterexampleParams::standard(N));
  return resample(u0, std::size_t{1} << (N + cfg.grid_offset));
}

InflationRun inflation_experiment(int N, const EvolutionConfig& cfg) {
  if (N > kMaxEvolutionN) {
    throw CapacityError("evolution runs support N <= " + std::to_string(kMaxEvolutionN));
  }
  const CounterexampleParams params = CounterexampleParams::standard(N);
  const Field u0 = evolution_datum(N, cfg);
  const double half = 1.0 / std::sqrt(static_cast<double>(N));
  InflationRun run = evolve_with_diagnostics(u0, 2.0 * half, cfg, {half}, std::max(params.grid.n_points, u0.size()));
  run.N = N;
  run.T_bar = 2.0 * half;
  const double ux0 = run.history.front().ux_b0;
  for (const auto& h : run.history) {
    if (same_time(h.t, half) && ux0 > 0.0) run.ux_growth_at_half = h.ux_b0 / ux0;
  }
  return run;
}

LinearizationReport early_time_linearization(const Field& u0, std::vector<double> times, const EvolutionConfig& cfg,
                                             int N) {
  cfg.validate();
  if (times.empty()) throw InvalidArgument("linearization needs at least one time");
  std::sort(times.begin(), times.end());
  if (!(times.front() > 0.0)) throw InvalidArgument("linearization times must be positive");

  const FilterBank bank(u0.grid());
  BlockNormEvaluator ev(bank, cfg.sampling);
  const Field e0 = build_E0(u0);
  const Field f0 = ch_rhs(u0);
  ComplexVector trunc(u0.spectrum().begin(), u0.spectrum().end());
  truncate_two_thirds(trunc);
  const Field base = Field::from_spectrum(u0.grid(), std::move(trunc));

  LinearizationReport rep;
  rep.N = N;
  rep.e0_b1 = besov_norm(e0.spectrum(), BesovSpec::b1_inf_1(), ev).value;
  const double gap = besov_norm((e0 - f0).spectrum(), BesovSpec::b1_inf_1(), ev).value;
  rep.r_limit = rep.e0_b1 > 0.0 ? gap / rep.e0_b1 : 0.0;

  SolveConfig sc = solve_config(cfg, times.back());
  sc.record_times = times;
  std::vector<std::pair<double, Field>> states;
  const Trajectory traj = solve(u0, sc, [&](const SolverState& s) {
    if (std::any_of(times.begin(), times.end(), [&](double t) { return same_time(s.t, t); })) {
      states.emplace_back(s.t, s.u);
    }
  });
  if (traj.broke_at) throw NumericalError("breaking inside the linearization window");

  auto ratio = [&](double num, double t) {
    if (num == 0.0) return 0.0;
    return rep.e0_b1 > 0.0 ? num / (t * rep.e0_b1) : std::numeric_limits<double>::infinity();
  };
  for (const auto& [t, u] : states) {
    const Field d = u - base;
    LinearizationSample s;
    s.t = t;
    s.r = ratio(besov_norm((d - e0.scaled(t)).spectrum(), BesovSpec::b1_inf_1(), ev).value, t);
    s.r_full = ratio(besov_norm((d - f0.scaled(t)).spectrum(), BesovSpec::b1_inf_1(), ev).value, t);
    rep.samples.push_back(s);
  }
  return rep;
}

LinearizationReport early_time_linearization(int N, std::vector<double> times, const EvolutionConfig& cfg) {
  if (N > kMaxEvolutionN) throw CapacityError("evolution runs support N <= " + std::to_string(kMaxEvolutionN));
  return early_time_linearization(build_u0(CounterexampleParams::standard(N)), std::move(times), cfg, N);
}

Field transported_e(const Field& u) {
  const Refined r(u.grid());
  const Field ux = r.up(derivative(u));
  const Field sq = r.down(mul(ux, ux));
  return apply_multiplier(sq, [](double xi) { return cplx{0.0, -0.5 * xi / (1.0 + xi * xi)}; });
}

Field transport_forcing(const Field& u) {
  const Refined r(u.grid());
  const Field uf = r.up(u);
  const Field uxf = r.up(derivative(u));
  const Field u2 = mul(uf, uf);
  const Field ux2 = mul(uxf, uxf);
  const Field u3 = mul(u2, uf);
  const Field p_half_ux2 = helmholtz_inv(ux2.scaled(0.5));
  const Field p_energy = helmholtz_inv(u2 + ux2.scaled(0.5));
  const Field flux = derivative(mul(uxf, p_energy));
  const Field inner = u3.scaled(1.0 / 3.0) - mul(uf, ux2).scaled(0.5) - flux;
  const Field g = u3.scaled(1.0 / 3.0) - mul(uf, p_half_ux2) - helmholtz_inv(inner);
  return r.down(g);
}

EResidualReport e_transport_residual(const Field& u0, double t_center, std::vector<double> deltas,
                                     std::vector<double> g_times, const EvolutionConfig& cfg, int N) {
  cfg.validate();
  if (deltas.size() < 2) throw InvalidArgument("the cadence ladder needs at least two deltas");
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  if (!(deltas.back() > 0.0) || !(t_center - deltas.front() > 0.0)) {
    throw InvalidArgument("need 0 < delta < t_center for centered differences");
  }
  std::sort(g_times.begin(), g_times.end());

  std::vector<double> wanted{t_center};
  for (double d : deltas) {
    wanted.push_back(t_center - d);
    wanted.push_back(t_center + d);
  }
  wanted.insert(wanted.end(), g_times.begin(), g_times.end());
  const double t_end = *std::max_element(wanted.begin(), wanted.end());
  if (!(t_end > 0.0)) throw InvalidArgument("residual window must be positive");

  SolveConfig sc = solve_config(cfg, t_end);
  sc.record_times = wanted;
  std::vector<std::pair<double, Field>> states;
  const Trajectory traj = solve(u0, sc, [&](const SolverState& s) {
    if (std::any_of(wanted.begin(), wanted.end(), [&](double t) { return same_time(s.t, t); })) {
      states.emplace_back(s.t, s.u);
    }
  });
  if (traj.broke_at) throw NumericalError("breaking inside the transport-residual window");
  auto at = [&](double t) -> const Field& {
    for (const auto& [ts, f] : states) {
      if (same_time(ts, t)) return f;
    }
    throw NumericalError("solver did not record a requested time");
  };

  const FilterBank bank(u0.grid());
  BlockNormEvaluator ev(bank, cfg.sampling);
  EResidualReport rep;
  rep.N = N;
  rep.t_center = t_center;

  const Field& uc = at(t_center);
  const Refined ref(uc.grid());
  const Field transport = ref.down(mul(ref.up(uc), ref.up(derivative(transported_e(uc)))));
  const Field g = transport_forcing(uc);
  for (double d : deltas) {
    const Field dedt = (transported_e(at(t_center + d)) - transported_e(at(t_center - d))).scaled(0.5 / d);
    const Field res = dedt + transport - g;
    rep.ladder.push_back({t_center, d, besov_norm(res.spectrum(), BesovSpec::b0_inf_1(), ev).value});
  }
  const bool all_positive = std::all_of(rep.ladder.begin(), rep.ladder.end(), [](const auto& r) { return r.residual_norm > 0.0; });
  if (all_positive) {
    std::vector<double> ds, rs;
    for (const auto& r : rep.ladder) {
      ds.push_back(r.delta);
      rs.push_back(r.residual_norm);
    }
    rep.order = fit_log2_slope(ds, rs).slope;
    rep.coarse = rep.order < 1.5;
  }

  for (double t : g_times) {
    const Field& u = at(t);
    GRatioSample s;
    s.t = t;
    s.g_b1 = besov_norm(transport_forcing(u).spectrum(), BesovSpec::b1_inf_1(), ev).value;
    s.lipschitz = lipschitz_norm(u);
    s.u_b1 = besov_norm(u.spectrum(), BesovSpec::b1_inf_1(), ev).value;
    const double denom = s.lipschitz * s.lipschitz * s.u_b1;
    s.ratio = denom > 0.0 ? s.g_b1 / denom : 0.0;
    rep.g_ratio.push_back(s);
  }
  if (!rep.g_ratio.empty()) {
    double mean = 0.0;
    for (const auto& s : rep.g_ratio) mean += s.ratio;
    mean /= static_cast<double>(rep.g_ratio.size());
    rep.g_ratio_mean = mean;
    for (const auto& s : rep.g_ratio) {
      if (mean > 0.0) rep.g_ratio_max_deviation = std::max(rep.g_ratio_max_deviation, std::abs(s.ratio / mean - 1.0));
    }
  }
  return rep;
}

EResidualReport e_transport_residual(int N, const EvolutionConfig& cfg) {
  if (N > kMaxEvolutionN) throw CapacityError("evolution runs support N <= " + std::to_string(kMaxEvolutionN));
  const double half = 1.0 / std::sqrt(static_cast<double>(N));
  std::vector<double> g_times;
  for (int k = 0; k <= 8; ++k) g_times.push_back(half * k / 8.0);
  // The O(delta^2) range of the centred difference shrinks roughly like 2^{-N/2}; a fixed cadence
  // sits on the pre-asymptotic plateau once N >= 6.
  const double d0 = std::exp2(-0.5 * N - 6.0);
  return e_transport_residual(build_u0(CounterexampleParams::standard(N)), 0.5 * half, {d0, d0 / 2, d0 / 4}, g_times,
                              cfg, N);
}

GridSpec control_grid() { return make_grid(16.0, 4096); }

Field gaussian_bump(double amplitude, double width, const GridSpec& grid) {
  if (!(width > 0.0) || !std::isfinite(amplitude)) throw InvalidArgument("bump needs finite amplitude and width > 0");
  return Field::sample(grid, [&](double x) { return amplitude * std::exp(-(x / width) * (x / width)); });
}

ControlReport no_inflation_experiment(double amplitude, double width, const EvolutionConfig& cfg, double window_factor,
                                      std::optional<double> window) {
  const Field u0 = gaussian_bump(amplitude, width, control_grid());
  ControlReport rep;
  rep.amplitude = amplitude;
  rep.width = width;
  const double lip = lipschitz_norm(u0);
  if (window) {
    rep.window = *window;
  } else {
    if (!(window_factor > 0.0)) throw InvalidArgument("window factor must be positive");
    // Zero data has an unbounded lifespan; any window shows K = 1.
    rep.window = lip > 0.0 ? window_factor / (4.0 * lip) : window_factor;
  }
  rep.run = evolve_with_diagnostics(u0, rep.window, cfg);
  rep.K = rep.run.amplification;
  rep.broke = rep.run.broke;
  return rep;
}

}  // namespace besovch
