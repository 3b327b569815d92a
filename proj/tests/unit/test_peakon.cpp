#include <gtest/gtest.h>

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "besovch/ch_solver.hpp"
#include "besovch/error.hpp"
#include "besovch/peakon.hpp"

using namespace besovch;

namespace {

// Same vector field written out independently for the odeint reference: state = (p1, p2, q1, q2).
void two_peakon_field(const std::vector<double>& s, std::vector<double>& ds, double) {
  const double d = s[2] - s[3];
  const double e = std::exp(-std::abs(d));
  const double sg = (d > 0.0) - (d < 0.0);
  ds[0] = s[0] * s[1] * sg * e;
  ds[1] = -s[0] * s[1] * sg * e;
  ds[2] = s[0] + s[1] * e;
  ds[3] = s[1] + s[0] * e;
}

std::vector<double> reference_two_peakon(double t_end) {
  using namespace boost::numeric::odeint;
  std::vector<double> s{1.0, 0.5, -5.0, 0.0};
  integrate_adaptive(make_controlled<runge_kutta_dopri5<std::vector<double>>>(1e-15, 1e-15), two_peakon_field, s, 0.0,
                     t_end, 1e-4);
  return s;
}

}  // namespace

TEST(Multipeakon, SinglePeakonTravelsAtItsAmplitude) {
  const auto d = multipeakon_rhs(PeakonState{{0.7}, {1.0}, 0.0});
  EXPECT_EQ(d.dp[0], 0.0);
  EXPECT_EQ(d.dq[0], 0.7);
}

TEST(Multipeakon, CoincidentPositionsUseZeroSign) {
  const auto d = multipeakon_rhs(PeakonState{{1.0, 2.0}, {0.0, 0.0}, 0.0});
  EXPECT_EQ(d.dp[0], 0.0);
  EXPECT_EQ(d.dp[1], 0.0);
  EXPECT_EQ(d.dq[0], 3.0);
}

TEST(Multipeakon, MomentumConserved) {
  const PeakonState s0{{1.0, -0.3, 0.8, 0.45, -0.2}, {-6.0, -2.5, 0.0, 1.7, 4.0}, 0.0};
  const auto traj = integrate_peakons(s0, 5.0, 1e-3, 100);
  for (const auto& s : traj) EXPECT_NEAR(s.momentum(), s0.momentum(), 1e-10) << s.t;
}

TEST(Multipeakon, TwoPeakonMatchesAdaptiveReference) {
  const auto traj = integrate_peakons(PeakonState{{1.0, 0.5}, {-5.0, 0.0}, 0.0}, 5.0, 1e-3);
  const auto& s = traj.back();
  EXPECT_DOUBLE_EQ(s.t, 5.0);
  const auto ref = reference_two_peakon(5.0);
  EXPECT_NEAR(s.p[0], ref[0], 1e-8);
  EXPECT_NEAR(s.p[1], ref[1], 1e-8);
  EXPECT_NEAR(s.q[0], ref[2], 1e-8);
  EXPECT_NEAR(s.q[1], ref[3], 1e-8);
}

TEST(Multipeakon, RejectsMalformedState) {
  EXPECT_THROW(PeakonState({{1.0}, {}, 0.0}).validate(), InvalidArgument);
  EXPECT_THROW(PeakonState({{}, {}, 0.0}).validate(), InvalidArgument);
  EXPECT_THROW(PeakonState({{std::nan("")}, {0.0}, 0.0}).validate(), InvalidArgument);
}

TEST(PeakonField, CrestAndMollification) {
  const GridSpec g = make_grid(16.0, 4096);
  const Field raw = peakon_field(PeakonState{{1.0}, {0.0}, 0.0}, g);
  EXPECT_NEAR(raw[2048], 1.0, 1e-12);
  const double w = 4.0 * g.dx();
  const Field soft = peakon_field(PeakonState{{1.0}, {0.0}, 0.0}, g, w);
  EXPECT_LE((soft - raw).sup_norm(), w);
  EXPECT_GT((soft - raw).sup_norm(), 0.0);
  EXPECT_THROW(peakon_field(PeakonState{{1.0}, {20.0}, 0.0}, g), InvalidArgument);
}

TEST(PeakonField, ProfileMatchesConvolutionQuadrature) {
  const double sigma = 0.3;
  for (double x : {-1.0, -0.2, 0.0, 0.05, 0.7, 3.0}) {
    double acc = 0.0;
    const int n = 20000;
    const double h = 16.0 * sigma / n;
    for (int i = 0; i <= n; ++i) {
      const double y = -8.0 * sigma + h * i;
      const double c = (i == 0 || i == n) ? 0.5 : 1.0;
      acc += c * std::exp(-std::abs(x - y)) * std::exp(-0.5 * y * y / (sigma * sigma));
    }
    acc *= h / (sigma * std::sqrt(2.0 * std::numbers::pi));
    EXPECT_NEAR(mollified_peakon_profile(x, sigma), acc, 1e-7) << x;
  }
}

TEST(PeakonField, OdeFieldMatchesPdeSolve) {
  const GridSpec g = make_grid(16.0, 1 << 14);
  const double w = 4.0 * g.dx();
  const PeakonState s0{{1.0, 0.5}, {-5.0, 0.0}, 0.0};
  SolveConfig cfg;
  cfg.t_end = 1.0;
  cfg.record_every = 0;
  const Trajectory tr = solve(peakon_field(s0, g, w), cfg);
  const Field ode = peakon_field(integrate_peakons(s0, 1.0, 1e-3).back(), g, w);
  EXPECT_LE((tr.states.back().u - ode).sup_norm() / ode.sup_norm(), 0.02);
}
