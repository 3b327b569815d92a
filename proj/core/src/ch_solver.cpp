#include "besovch/ch_solver.hpp"

#include <algorithm>
#include <cmath>

#include "besovch/besov.hpp"
#include "besovch/error.hpp"

namespace besovch {

void SolveConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidArgument("cfl must lie in (0, 1]");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be positive and finite");
  if (!(breaking_threshold > 0.0)) throw InvalidArgument("breaking_threshold must be positive");
  if (!(speed_floor >= 0.0)) throw InvalidArgument("speed_floor must be non-negative");
  if (!(max_dt > 0.0)) throw InvalidArgument("max_dt must be positive");
  if (!(fixed_dt >= 0.0) || !std::isfinite(fixed_dt)) throw InvalidArgument("fixed_dt must be finite and >= 0");
  for (double t : record_times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("record_times must be finite and >= 0");
  }
}

ChRhs::ChRhs(const GridSpec& grid, bool dealias)
    : grid_(grid),
      dealias_(dealias),
      fft_(grid.n_points),
      cutoff_(two_thirds_cutoff(grid.n_points)),
      spec_a_(grid.spectrum_size()),
      spec_b_(grid.spectrum_size()),
      u_(grid.n_points),
      ux_(grid.n_points) {}

void ChRhs::evaluate(std::span<const cplx> u_hat, std::span<cplx> out_hat) {
  const std::size_t ns = grid_.spectrum_size();
  if (u_hat.size() != ns || out_hat.size() != ns) throw InvalidArgument("ChRhs: spectrum size mismatch");
  const std::size_t half = ns - 1;
  const std::size_t top = dealias_ ? std::min(cutoff_, half) : half;

  for (std::size_t k = 0; k < ns; ++k) {
    const cplx c = k <= top ? u_hat[k] : cplx{};
    spec_a_[k] = c;
    spec_b_[k] = k == half ? cplx{} : cplx{0.0, grid_.wavenumber(k)} * c;
  }
  fft_.inverse_destructive(spec_a_, u_);
  fft_.inverse_destructive(spec_b_, ux_);

  double min_ux = std::numeric_limits<double>::infinity();
  double max_u = 0.0;
  for (std::size_t m = 0; m < u_.size(); ++m) {
    const double u = u_[m];
    const double ux = ux_[m];
    min_ux = std::min(min_ux, ux);
    max_u = std::max(max_u, std::abs(u));
    u_[m] = u * ux;
    ux_[m] = u * u + 0.5 * ux * ux;
  }
  last_min_ux_ = min_ux;
  last_max_abs_u_ = max_u;

  fft_.forward(u_, spec_a_);
  fft_.forward(ux_, spec_b_);
  for (std::size_t k = 0; k < ns; ++k) {
    if (k > top) {
      out_hat[k] = cplx{};
      continue;
    }
    const double xi = grid_.wavenumber(k);
    const cplx nonlocal = k == half ? cplx{} : cplx{0.0, xi / (1.0 + xi * xi)} * spec_b_[k];
    out_hat[k] = -spec_a_[k] - nonlocal;
  }
  out_hat[0].imag(0.0);
  out_hat[half].imag(0.0);
}

Field ch_rhs(const Field& u, bool dealias) {
  ChRhs rhs(u.grid(), dealias);
  ComplexVector out(u.grid().spectrum_size());
  rhs.evaluate(u.spectrum(), out);
  for (const cplx& c : out) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw NumericalError("ch_rhs: non-finite value");
  }
  return Field::from_spectrum(u.grid(), std::move(out));
}

Diagnostics compute_diagnostics(const Field& u, const SolveConfig& cfg) {
  Diagnostics d;
  d.h1_energy = h1_energy(u);
  const Field ux = derivative(u);
  const auto uxs = ux.samples();
  d.min_ux = uxs.empty() ? 0.0 : *std::min_element(uxs.begin(), uxs.end());
  d.max_abs_u = u.sup_norm();
  if (cfg.besov_diagnostics) {
    const FilterBank bank(u.grid());
    BlockNormEvaluator ev(bank, cfg.sampling);
    d.besov_b1_inf_1 = besov_norm(u.spectrum(), BesovSpec::b1_inf_1(), ev).value;
  }
  return d;
}

namespace {

constexpr double kMinDt = 1e-12;

// Classical RK4 on a half-complex spectrum. k1 must already hold rhs(u).
class Rk4Stepper {
 public:
  Rk4Stepper(const GridSpec& grid, bool dealias)
      : rhs_(grid, dealias), stage_(grid.spectrum_size()), k_(grid.spectrum_size()), acc_(grid.spectrum_size()) {}

  ChRhs& rhs() noexcept { return rhs_; }

  void step(std::span<cplx> u, std::span<const cplx> k1, double dt) {
    const std::size_t ns = u.size();
    for (std::size_t i = 0; i < ns; ++i) {
      acc_[i] = k1[i];
      stage_[i] = u[i] + 0.5 * dt * k1[i];
    }
    rhs_.evaluate(stage_, k_);
    for (std::size_t i = 0; i < ns; ++i) {
      acc_[i] += 2.0 * k_[i];
      stage_[i] = u[i] + 0.5 * dt * k_[i];
    }
    rhs_.evaluate(stage_, k_);
    for (std::size_t i = 0; i < ns; ++i) {
      acc_[i] += 2.0 * k_[i];
      stage_[i] = u[i] + dt * k_[i];
    }
    rhs_.evaluate(stage_, k_);
    for (std::size_t i = 0; i < ns; ++i) u[i] += dt / 6.0 * (acc_[i] + k_[i]);
  }

 private:
  ChRhs rhs_;
  ComplexVector stage_, k_, acc_;
};

double rule_dt(const GridSpec& grid, const SolveConfig& cfg, double max_abs_u) {
  if (cfg.fixed_dt > 0.0) return cfg.fixed_dt;
  const double speed = std::max(cfg.speed_floor, max_abs_u);
  double dt = speed > 0.0 ? cfg.cfl * grid.dx() / speed : cfg.max_dt;
  dt = std::min(dt, cfg.max_dt);
  if (!std::isfinite(dt)) dt = cfg.t_end;
  return dt;
}

bool spectrum_finite(std::span<const cplx> s) {
  return std::all_of(s.begin(), s.end(),
                     [](const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

}  // namespace

SolverState step_rk4(const SolverState& state, const SolveConfig& cfg) {
  cfg.validate();
  const GridSpec& grid = state.u.grid();
  Rk4Stepper stepper(grid, cfg.dealias);
  ComplexVector u(state.u.spectrum().begin(), state.u.spectrum().end());
  if (cfg.dealias) truncate_two_thirds(u);
  ComplexVector k1(u.size());
  stepper.rhs().evaluate(u, k1);
  const double dt = rule_dt(grid, cfg, stepper.rhs().last_max_abs_u());
  if (dt < kMinDt) throw NumericalError("step_rk4: time step underflow (breaking or stiffness)");
  stepper.step(u, k1, dt);
  if (!spectrum_finite(u)) throw NumericalError("step_rk4: non-finite state");
  SolverState next{state.t + dt, Field::from_spectrum(grid, std::move(u)), dt, {}};
  next.diagnostics = compute_diagnostics(next.u, cfg);
  return next;
}

Trajectory solve(const Field& u0, const SolveConfig& cfg, const RecordObserver& observer) {
  cfg.validate();
  const GridSpec& grid = u0.grid();
  std::vector<double> targets;
  for (double t : cfg.record_times) {
    if (t > 0.0 && t < cfg.t_end) targets.push_back(t);
  }
  targets.push_back(cfg.t_end);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  Trajectory traj;
  Rk4Stepper stepper(grid, cfg.dealias);
  ComplexVector u(u0.spectrum().begin(), u0.spectrum().end());
  if (cfg.dealias) truncate_two_thirds(u);
  ComplexVector k1(u.size());

  auto record = [&](double t, double dt) {
    SolverState s{t, Field::from_spectrum(grid, ComplexVector(u.begin(), u.end())), dt, {}};
    s.diagnostics = compute_diagnostics(s.u, cfg);
    if (observer) observer(s);
    if (cfg.keep_states) traj.states.push_back(std::move(s));
  };

  double t = 0.0;
  double last_dt = 0.0;
  std::size_t target_idx = 0;
  record(t, last_dt);

  while (target_idx < targets.size()) {
    if (cfg.deadline && std::chrono::steady_clock::now() > *cfg.deadline) {
      throw BudgetExceeded("solve: wall-clock budget exhausted at t = " + std::to_string(t) + " of " +
                           std::to_string(cfg.t_end) + " after " + std::to_string(traj.steps) + " steps");
    }
    stepper.rhs().evaluate(u, k1);
    const double min_ux = stepper.rhs().last_min_ux();
    if (!std::isfinite(min_ux) || min_ux < -cfg.breaking_threshold || !spectrum_finite(k1)) {
      traj.broke_at = t;
      break;
    }
    const double dt_rule = rule_dt(grid, cfg, stepper.rhs().last_max_abs_u());
    if (dt_rule < kMinDt) {
      traj.broke_at = t;
      break;
    }
    const double target = targets[target_idx];
    double dt = dt_rule;
    bool lands = false;
    // Land exactly on the next target; absorb a final sliver instead of taking a tiny step.
    if (t + dt >= target - 1e-12 * std::max(1.0, target)) {
      dt = target - t;
      lands = true;
    }
    stepper.step(u, k1, dt);
    ++traj.steps;
    t = lands ? target : t + dt;
    last_dt = dt;
    if (!spectrum_finite(u)) {
      traj.broke_at = t;
      break;
    }
    const bool cadence = cfg.record_every > 0 && traj.steps % cfg.record_every == 0;
    if (lands) ++target_idx;
    if (lands || cadence) record(t, last_dt);
  }
  return traj;
}

}  // namespace besovch
