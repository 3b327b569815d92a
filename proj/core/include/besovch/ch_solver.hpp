#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "besovch/fft.hpp"
#include "besovch/grid.hpp"
#include "besovch/littlewood_paley.hpp"

namespace besovch {

struct Diagnostics {
  double h1_energy = 0.0;
  double min_ux = 0.0;
  double max_abs_u = 0.0;
  std::optional<double> besov_b1_inf_1;
};

struct SolverState {
  double t = 0.0;
  Field u;
  double dt = 0.0;
  Diagnostics diagnostics;
};

struct SolveConfig {
  double cfl = 0.4;
  double t_end = 1.0;
  bool dealias = true;
  double breaking_threshold = 1e3;
  /// Record every this many steps (0 disables step-count recording).
  std::size_t record_every = 1;
  /// dt = cfl * dx / max(speed_floor, max|u|), capped by max_dt.
  double speed_floor = 1.0;
  double max_dt = std::numeric_limits<double>::infinity();
  /// When positive, overrides the CFL rule (the last step is shortened to land on t_end).
  double fixed_dt = 0.0;
  /// Extra times the stepper lands on exactly and records.
  std::vector<double> record_times;
  bool besov_diagnostics = false;
  BlockSampling sampling;
  /// Keep recorded states in the returned trajectory (observers see them either way).
  bool keep_states = true;
  /// Abort with BudgetExceeded once this wall-clock instant passes.
  std::optional<std::chrono::steady_clock::time_point> deadline;

  void validate() const;
};

struct Trajectory {
  std::vector<SolverState> states;
  std::optional<double> broke_at;
  std::size_t steps = 0;
};

/// Right-hand side of u_t = -u u_x - d_x (1 - d_xx)^{-1}(u^2 + u_x^2 / 2) on spectra.
///
/// Owns FFT scratch, so one instance per thread. With dealiasing the input is read through the
/// 2/3 truncation and every quadratic product is truncated again.
class ChRhs {
 public:
  ChRhs(const GridSpec& grid, bool dealias = true);
  const GridSpec& grid() const noexcept { return grid_; }
  void evaluate(std::span<const cplx> u_hat, std::span<cplx> out_hat);
  /// min u_x and max |u| of the most recent evaluate() input.
  double last_min_ux() const noexcept { return last_min_ux_; }
  double last_max_abs_u() const noexcept { return last_max_abs_u_; }

 private:
  GridSpec grid_;
  bool dealias_;
  RealFft fft_;
  std::size_t cutoff_;
  ComplexVector spec_a_, spec_b_;
  RealVector u_, ux_;
  double last_min_ux_ = 0.0;
  double last_max_abs_u_ = 0.0;
};

Field ch_rhs(const Field& u, bool dealias = true);

Diagnostics compute_diagnostics(const Field& u, const SolveConfig& cfg);

/// One classical RK4 step; dt from the config's step rule.
SolverState step_rk4(const SolverState& state, const SolveConfig& cfg);

using RecordObserver = std::function<void(const SolverState&)>;

/// Integrates from t = 0 to cfg.t_end (or breaking), recording at t = 0, on the step cadence, at
/// each requested record time and at the final time.
Trajectory solve(const Field& u0, const SolveConfig& cfg, const RecordObserver& observer = {});

}  // namespace besovch
