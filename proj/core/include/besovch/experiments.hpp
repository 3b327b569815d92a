#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "besovch/ch_solver.hpp"
#include "besovch/counterexample.hpp"
#include "besovch/littlewood_paley.hpp"

namespace besovch {

/// Largest N the evolution experiments accept (grid 2^{N+9} <= 2^21 points).
inline constexpr int kMaxEvolutionN = 12;

struct EvolutionConfig {
  double cfl = 0.4;
  /// Time steps per unit window: max_dt = window / steps_per_window.
  double steps_per_window = 200.0;
  double breaking_threshold = 1e3;
  /// Number of evenly spaced diagnostic records in the window (t = 0 is always recorded).
  std::size_t records = 16;
  /// Inflation runs evolve on 2^{N + grid_offset} points. Norms are always taken on the
  /// zero-padded 2^{N+9} analysis grid, so the filter bank covers the carrier band.
  int grid_offset = 9;
  BlockSampling sampling;
  /// Wall-clock limit per evolution in seconds (0: unlimited); overruns throw BudgetExceeded.
  double wall_budget_seconds = 0.0;

  void validate() const;
};

struct InflationSample {
  double t = 0.0;
  double u_b1 = 0.0;       // ||u||_{B^1_{inf,1}}
  double ux_b0 = 0.0;      // ||u_x||_{B^0_{inf,1}}
  double lipschitz = 0.0;  // ||u||_inf + ||u_x||_inf
  double h1 = 0.0;
};

struct InflationRun {
  int N = 0;
  std::size_t n_points = 0;
  double T_bar = 0.0;                // 2 N^{-1/2}
  std::vector<InflationSample> history;
  double amplification = 1.0;        // max_t ||u(t)||_{B^1} / ||u0||_{B^1}
  double ux_growth_at_half = 0.0;    // ||u_x(N^{-1/2})||_{B^0} / ||u_x(0)||_{B^0}
  bool broke = false;
  std::optional<double> broke_at;
  std::size_t steps = 0;
};

/// Solves from the counterexample data up to T_bar = 2 N^{-1/2} (or breaking).
InflationRun inflation_experiment(int N, const EvolutionConfig& cfg = {});

/// Diagnostics of an arbitrary initial field over [0, t_end]; amplification uses ||.||_{B^1_{inf,1}}.
/// A nonzero `analysis_points` zero-pads each recorded state onto that grid before taking norms.
InflationRun evolve_with_diagnostics(const Field& u0, double t_end, const EvolutionConfig& cfg,
                                     std::vector<double> extra_times = {}, std::size_t analysis_points = 0);

/// The counterexample datum on its evolution grid 2^{N + cfg.grid_offset}.
Field evolution_datum(int N, const EvolutionConfig& cfg);

struct LinearizationSample {
  double t = 0.0;
  double r = 0.0;          // ||u(t) - u0 - t E0||_{B^1} / (t ||E0||_{B^1})
  double r_full = 0.0;     // same with E0 replaced by the full initial tendency u_t(0)
};

struct LinearizationReport {
  int N = 0;
  double e0_b1 = 0.0;
  /// Limit of r(t) as t -> 0: ||u0 u0_x + d_x P(u0^2)||_{B^1} / ||E0||_{B^1} (Eulerian transport).
  double r_limit = 0.0;
  std::vector<LinearizationSample> samples;
};

/// Compares u(t) with the leading-order mechanism u0 + t E0 for t in `times` (sorted ascending).
LinearizationReport early_time_linearization(const Field& u0, std::vector<double> times, const EvolutionConfig& cfg = {},
                                             int N = 0);
LinearizationReport early_time_linearization(int N, std::vector<double> times, const EvolutionConfig& cfg = {});

/// E = -(1 - d_xx)^{-1} d_x (u_x^2 / 2).
Field transported_e(const Field& u);

/// G = u^3/3 - u P(u_x^2/2) - P(u^3/3 - u u_x^2/2 - d_x[u_x P(u^2 + u_x^2/2)]), P = (1 - d_xx)^{-1}.
/// Products are formed on a twice-refined grid and truncated back, so they are alias-free.
Field transport_forcing(const Field& u);

struct TransportResidual {
  double t = 0.0;
  double delta = 0.0;          // centered-difference half step
  double residual_norm = 0.0;  // ||(E(t+d) - E(t-d))/(2d) + u E_x - G||_{B^0_{inf,1}}
};

struct GRatioSample {
  double t = 0.0;
  double g_b1 = 0.0;
  double lipschitz = 0.0;
  double u_b1 = 0.0;
  double ratio = 0.0;  // g_b1 / (lipschitz^2 u_b1)
};

struct EResidualReport {
  int N = 0;
  double t_center = 0.0;
  std::vector<TransportResidual> ladder;  // decreasing delta
  double order = 0.0;                     // fitted log2 slope of residual against delta
  bool coarse = false;                    // convergence order below 1.5: residual dominated by noise
  std::vector<GRatioSample> g_ratio;
  double g_ratio_mean = 0.0;
  double g_ratio_max_deviation = 0.0;     // max |ratio / mean - 1|
};

EResidualReport e_transport_residual(const Field& u0, double t_center, std::vector<double> deltas,
                                     std::vector<double> g_times, const EvolutionConfig& cfg = {}, int N = 0);
/// Counterexample data: t_center = N^{-1/2} / 2, deltas 2^{-N/2-6} {1, 1/2, 1/4}, G sampled on [0, N^{-1/2}].
EResidualReport e_transport_residual(int N, const EvolutionConfig& cfg = {});

struct ControlReport {
  double amplitude = 0.0;
  double width = 0.0;
  double window = 0.0;     // 1 / (4 ||u0||_{C^{0,1}}) times window_factor, or the explicit window
  double K = 1.0;          // max_t ||u(t)||_{B^1} / ||u0||_{B^1}
  bool broke = false;
  InflationRun run;
};

/// Gaussian bump a e^{-(x/w)^2} on L = 16, n = 2^12.
Field gaussian_bump(double amplitude, double width, const GridSpec& grid);
GridSpec control_grid();

ControlReport no_inflation_experiment(double amplitude, double width, const EvolutionConfig& cfg = {},
                                      double window_factor = 1.0, std::optional<double> window = std::nullopt);

}  // namespace besovch
