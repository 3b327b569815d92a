#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "besovch/error.hpp"
#include "besovch/fft.hpp"
#include "besovch/grid.hpp"
#include "oracles.hpp"

using namespace besovch;

namespace {

std::vector<double> random_samples(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST(RealFft, ForwardMatchesDirectSum) {
  const auto f = random_samples(64, 1);
  const RealFft fft(64);
  ComplexVector out(fft.spectrum_size());
  fft.forward(f, out);
  const auto ref = oracle::dft(f);
  for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_LT(std::abs(out[k] - ref[k]), 1e-14) << k;
}

TEST(RealFft, InverseRoundTrip) {
  const auto f = random_samples(256, 2);
  const RealFft fft(256);
  ComplexVector spec(fft.spectrum_size());
  fft.forward(f, spec);
  RealVector back(256);
  fft.inverse(spec, back);
  EXPECT_LT(oracle::max_abs_diff(f, back), 1e-13);
}

TEST(ComplexFft, ForwardThenInverseIsIdentity) {
  const ComplexFft fft(128);
  ComplexVector v(128);
  const auto re = random_samples(128, 3);
  const auto im = random_samples(128, 4);
  for (std::size_t i = 0; i < 128; ++i) v[i] = {re[i], im[i]};
  const ComplexVector orig = v;
  fft.forward(v);
  // Single mode check on the forward convention.
  ComplexVector e(128);
  for (std::size_t m = 0; m < 128; ++m) e[m] = std::polar(1.0, 2.0 * std::numbers::pi * 5.0 * m / 128.0);
  fft.forward(e);
  EXPECT_NEAR(std::abs(e[5] - cplx{1.0, 0.0}), 0.0, 1e-14);
  fft.inverse(v);
  for (std::size_t i = 0; i < 128; ++i) EXPECT_LT(std::abs(v[i] - orig[i]), 1e-13);
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(make_grid(1.0, 100), InvalidArgument);
  EXPECT_THROW(make_grid(1.0, 8), InvalidArgument);
  EXPECT_THROW(make_grid(-1.0, 64), InvalidArgument);
  EXPECT_NO_THROW(make_grid(1.0, 64));
}

TEST(Grid, WavenumbersAndPoints) {
  const GridSpec g = make_grid(2.0, 64);
  EXPECT_DOUBLE_EQ(g.x(0), -2.0);
  EXPECT_DOUBLE_EQ(g.dx(), 4.0 / 64.0);
  EXPECT_DOUBLE_EQ(g.wavenumber(3), 3.0 * std::numbers::pi / 2.0);
  EXPECT_DOUBLE_EQ(g.nyquist(), g.wavenumber(32));
}

TEST(Grid, DerivativeOfTrigPolynomial) {
  const GridSpec g = make_grid(std::numbers::pi, 64);
  const Field f = Field::sample(g, [](double x) { return std::sin(3.0 * x) + 0.5 * std::cos(7.0 * x); });
  const Field d = derivative(f);
  for (std::size_t m = 0; m < g.n_points; ++m) {
    const double x = g.x(m);
    EXPECT_NEAR(d[m], 3.0 * std::cos(3.0 * x) - 3.5 * std::sin(7.0 * x), 1e-12);
  }
}

TEST(Grid, HelmholtzInverseMatchesPeriodicGreenFunction) {
  // (1 - d_xx)^{-1} f = G * f with G(x) = cosh(L - |x|) / (2 sinh L) on period 2L. The Gaussian
  // data is smooth, so the kink of G limits the trapezoid rule to second order.
  const double L = 8.0;
  const GridSpec g = make_grid(L, 512);
  auto f = [](double x) { return std::exp(-x * x); };
  const Field pf = helmholtz_inv(Field::sample(g, f));
  const std::size_t fine = 1 << 15;
  const double h = 2.0 * L / fine;
  for (std::size_t m = 0; m < g.n_points; m += 37) {
    const double x = g.x(m);
    double acc = 0.0;
    for (std::size_t i = 0; i < fine; ++i) {
      const double y = -L + h * static_cast<double>(i);
      double r = std::fmod(std::abs(x - y), 2.0 * L);
      if (r > L) r = 2.0 * L - r;
      acc += std::cosh(L - r) / (2.0 * std::sinh(L)) * f(y);
    }
    EXPECT_NEAR(pf[m], acc * h, 1e-6) << x;
  }
}

TEST(Grid, HelmholtzDxAgreesWithComposition) {
  const GridSpec g = make_grid(4.0, 128);
  const Field f = Field::sample(g, [](double x) { return std::exp(-2.0 * x * x) * std::sin(x); });
  const Field a = helmholtz_inv_dx(f);
  const Field b = derivative(helmholtz_inv(f));
  EXPECT_LT((a - b).sup_norm(), 1e-13);
}

TEST(Grid, DealiasedProductIsExactForBandLimitedFactors) {
  const GridSpec g = make_grid(std::numbers::pi, 64);
  const Field a = Field::sample(g, [](double x) { return std::cos(4.0 * x); });
  const Field b = Field::sample(g, [](double x) { return std::sin(5.0 * x); });
  const Field p = product(a, b);
  for (std::size_t m = 0; m < g.n_points; ++m) {
    EXPECT_NEAR(p[m], std::cos(4.0 * g.x(m)) * std::sin(5.0 * g.x(m)), 1e-13);
  }
  EXPECT_EQ(two_thirds_cutoff(64), 21u);
}

TEST(Grid, TwoThirdsTruncationRemovesHighModes) {
  const GridSpec g = make_grid(std::numbers::pi, 64);
  const Field f = Field::sample(g, [](double x) { return std::cos(30.0 * x) + std::cos(2.0 * x); });
  ComplexVector s(f.spectrum().begin(), f.spectrum().end());
  truncate_two_thirds(s);
  const Field t = Field::from_spectrum(g, std::move(s));
  for (std::size_t m = 0; m < g.n_points; ++m) EXPECT_NEAR(t[m], std::cos(2.0 * g.x(m)), 1e-13);
}

TEST(Grid, ShiftIsCircular) {
  const GridSpec g = make_grid(1.0, 16);
  const Field f = Field::sample(g, [](double x) { return x; });
  const Field s = shift(f, 3);
  for (std::size_t m = 0; m < 16; ++m) EXPECT_DOUBLE_EQ(s[(m + 3) % 16], f[m]);
  EXPECT_LT((shift(s, -3) - f).sup_norm(), 1e-15);
}

TEST(Grid, ResamplePadsAndTruncatesSpectrally) {
  const GridSpec g = make_grid(std::numbers::pi, 32);
  const Field f = Field::sample(g, [](double x) { return std::sin(3.0 * x) + std::cos(16.0 * x); });
  const Field up = resample(f, 128);
  for (std::size_t m = 0; m < up.size(); ++m) {
    const double x = up.grid().x(m);
    EXPECT_NEAR(up[m], std::sin(3.0 * x) + std::cos(16.0 * x), 1e-13);
  }
  const Field down = resample(up, 16);
  for (std::size_t m = 0; m < 16; ++m) EXPECT_NEAR(down[m], std::sin(3.0 * down.grid().x(m)), 1e-13);
}

TEST(Grid, IntegralOfGaussian) {
  const GridSpec g = make_grid(10.0, 256);
  const Field f = Field::sample(g, [](double x) { return std::exp(-x * x); });
  EXPECT_NEAR(integral(f), std::sqrt(std::numbers::pi), 1e-12);
}

TEST(Grid, MultiplierRejectsNonFiniteValues) {
  const GridSpec g = make_grid(1.0, 32);
  const Field f = Field::constant(g, 1.0);
  EXPECT_THROW(apply_multiplier(f, [](double) { return cplx{std::nan(""), 0.0}; }), NumericalError);
}
