#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "besovch/besov.hpp"
#include "besovch/ch_solver.hpp"
#include "besovch/error.hpp"
#include "besovch/peakon.hpp"
#include "oracles.hpp"

using namespace besovch;

namespace {

Field smooth_datum(const GridSpec& g) {
  return Field::sample(g, [](double x) { return 0.3 * std::sin(x) + 0.1 * std::cos(2.0 * x) + 0.05 * std::sin(3.0 * x + 0.4); });
}

Field solve_to(const Field& u0, double t_end, double dt) {
  SolveConfig cfg;
  cfg.t_end = t_end;
  cfg.fixed_dt = dt;
  cfg.record_every = 0;
  const Trajectory tr = solve(u0, cfg);
  return tr.states.back().u;
}

}  // namespace

TEST(ChRhs, SingleCosineHasClosedForm) {
  // u = a cos x: u u_x = -a^2 sin(2x) / 2 and d_x P(u^2 + u_x^2/2) = -a^2 sin(2x) / 10.
  const GridSpec g = make_grid(std::numbers::pi, 64);
  const double a = 0.7;
  const Field r = ch_rhs(Field::sample(g, [&](double x) { return a * std::cos(x); }));
  for (std::size_t m = 0; m < g.n_points; ++m) EXPECT_NEAR(r[m], 0.6 * a * a * std::sin(2.0 * g.x(m)), 1e-14);
}

TEST(ChRhs, MatchesDirectModeSumOracle) {
  // Band-limited data with |k| <= n/6: every product is resolved, so the oracle needs no truncation.
  const GridSpec g = make_grid(3.0, 128);
  std::vector<oracle::cplx> c(g.spectrum_size());
  for (std::size_t k = 0; k <= g.n_points / 6; ++k) c[k] = {0.3 / (1.0 + k), 0.2 * std::sin(1.0 + k) / (1.0 + k)};
  c[0] = 0.1;
  const auto id = [](double) { return oracle::cplx{1.0, 0.0}; };
  const auto dx = [](double xi) { return oracle::cplx{0.0, xi}; };
  const auto u = oracle::synthesize(g, c, id);
  const auto ux = oracle::synthesize(g, c, dx);
  std::vector<double> adv(g.n_points), pres(g.n_points);
  for (std::size_t m = 0; m < g.n_points; ++m) {
    adv[m] = u[m] * ux[m];
    pres[m] = u[m] * u[m] + 0.5 * ux[m] * ux[m];
  }
  const auto a_hat = oracle::dft(adv);
  const auto p_hat = oracle::dft(pres);
  const auto a_s = oracle::synthesize(g, a_hat, id);
  const auto p_s = oracle::synthesize(g, p_hat, [](double xi) { return oracle::cplx{0.0, xi / (1.0 + xi * xi)}; });
  std::vector<double> expected(g.n_points);
  for (std::size_t m = 0; m < g.n_points; ++m) expected[m] = -a_s[m] - p_s[m];

  const Field uf = Field::from_samples(g, std::span<const double>(u));
  const Field r = ch_rhs(uf);
  EXPECT_LT(oracle::max_abs_diff(expected, r.samples()), 1e-13 * std::max(1.0, oracle::max_abs(expected)));
}

TEST(ChRhs, ZeroIsStationary) {
  const GridSpec g = make_grid(1.0, 32);
  EXPECT_EQ(ch_rhs(Field::zeros(g)).sup_norm(), 0.0);
}

TEST(Solver, Rk4ConvergesAtFourthOrder) {
  const GridSpec g = make_grid(std::numbers::pi, 64);
  const Field u0 = smooth_datum(g);
  const Field ref = solve_to(u0, 1.0, 1.0 / 640.0);
  const double e1 = (solve_to(u0, 1.0, 1.0 / 20.0) - ref).sup_norm();
  const double e2 = (solve_to(u0, 1.0, 1.0 / 40.0) - ref).sup_norm();
  const double e3 = (solve_to(u0, 1.0, 1.0 / 80.0) - ref).sup_norm();
  const double order = std::log2(std::sqrt(e1 / e3));
  EXPECT_NEAR(order, 4.0, 0.3) << e1 << " " << e2 << " " << e3;
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.3);
}

TEST(Solver, H1DriftOnSmoothData) {
  const GridSpec g = make_grid(std::numbers::pi, 128);
  const Field u0 = smooth_datum(g);
  SolveConfig cfg;
  cfg.t_end = 1.0;
  cfg.record_every = 10;
  const Trajectory tr = solve(u0, cfg);
  ASSERT_FALSE(tr.broke_at);
  const double e0 = tr.states.front().diagnostics.h1_energy;
  for (const auto& s : tr.states) EXPECT_LE(std::abs(s.diagnostics.h1_energy - e0) / e0, 1e-6) << s.t;
  EXPECT_DOUBLE_EQ(tr.states.back().t, 1.0);
}

TEST(Solver, MollifiedPeakonTravelsAtItsAmplitude) {
  const GridSpec g = make_grid(16.0, 1 << 14);
  const double w = 4.0 * g.dx();
  const Field u0 = peakon_field(PeakonState{{1.0}, {-2.0}, 0.0}, g, w);
  SolveConfig cfg;
  cfg.t_end = 1.0;
  cfg.record_every = 0;
  cfg.keep_states = true;
  const Trajectory tr = solve(u0, cfg);
  const Field exact = peakon_field(PeakonState{{1.0}, {-1.0}, 0.0}, g, w);
  const double rel = (tr.states.back().u - exact).sup_norm() / exact.sup_norm();
  EXPECT_LE(rel, 0.01);
}

TEST(Solver, TranslationEquivariance) {
  const GridSpec g = make_grid(std::numbers::pi, 64);
  const Field u0 = smooth_datum(g);
  const Field a = shift(solve_to(u0, 0.5, 0.01), 5);
  const Field b = solve_to(shift(u0, 5), 0.5, 0.01);
  EXPECT_LT((a - b).sup_norm(), 1e-13);
}

TEST(Solver, LandsOnRequestedTimes) {
  const GridSpec g = make_grid(std::numbers::pi, 64);
  SolveConfig cfg;
  cfg.t_end = 0.5;
  cfg.record_every = 0;
  cfg.record_times = {0.1, 0.3};
  const Trajectory tr = solve(smooth_datum(g), cfg);
  ASSERT_EQ(tr.states.size(), 4u);
  EXPECT_DOUBLE_EQ(tr.states[1].t, 0.1);
  EXPECT_DOUBLE_EQ(tr.states[2].t, 0.3);
  EXPECT_DOUBLE_EQ(tr.states[3].t, 0.5);
}

TEST(Solver, PeakonAntipeakonCollisionFlagsBreaking) {
  const GridSpec g = make_grid(16.0, 1 << 12);
  const Field u0 = peakon_field(PeakonState{{1.0, -1.0}, {-1.0, 1.0}, 0.0}, g, 4.0 * g.dx());
  SolveConfig cfg;
  cfg.t_end = 4.0;
  cfg.record_every = 0;
  // The resolved slope peaks near -15 on this grid before the Galerkin flow smooths it out.
  cfg.breaking_threshold = 10.0;
  const Trajectory tr = solve(u0, cfg);
  ASSERT_TRUE(tr.broke_at.has_value());
  EXPECT_GT(*tr.broke_at, 1.0);
  EXPECT_LT(*tr.broke_at, 2.0);
}

TEST(Solver, DeadlineInThePastAborts) {
  const GridSpec g = make_grid(std::numbers::pi, 64);
  SolveConfig cfg;
  cfg.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  EXPECT_THROW(solve(smooth_datum(g), cfg), BudgetExceeded);
}

TEST(Solver, RejectsBadConfig) {
  SolveConfig cfg;
  cfg.cfl = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}
