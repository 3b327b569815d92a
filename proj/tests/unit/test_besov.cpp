#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "besovch/besov.hpp"
#include "besovch/error.hpp"

using namespace besovch;

namespace {

// sup over grid points of Delta_j f for the periodized f = e^{-x^2}, summed mode by mode from the
// analytic transform sqrt(pi) e^{-xi^2/4} instead of from sampled data.
double gaussian_block_sup(int j, const GridSpec& g) {
  auto fhat = [](double xi) { return std::sqrt(std::numbers::pi) * std::exp(-xi * xi / 4.0); };
  auto w = [&](double xi) { return j < 0 ? chi(xi) : phi(std::ldexp(xi, -j)); };
  const double L = g.half_length;
  double best = 0.0;
  for (std::size_t m = 0; m < g.n_points; ++m) {
    const double x = g.x(m);
    double acc = w(0.0) * fhat(0.0);
    for (int k = 1; k < 400; ++k) {
      const double xi = std::numbers::pi * k / L;
      acc += 2.0 * w(xi) * fhat(xi) * std::cos(xi * x);
    }
    best = std::max(best, std::abs(acc / (2.0 * L)));
  }
  return best;
}

}  // namespace

TEST(BesovSpec, Validation) {
  EXPECT_NO_THROW(BesovSpec::b0_inf_1().validate());
  EXPECT_NO_THROW(BesovSpec::log_inf(1.0).validate());
  BesovSpec bad = BesovSpec::b1_inf_1();
  bad.log_weight = true;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(BesovSpec, ParsesExponents) {
  EXPECT_EQ(parse_lp_exponent("1"), LpExponent::one);
  EXPECT_EQ(parse_lp_exponent("2"), LpExponent::two);
  EXPECT_EQ(parse_lp_exponent("inf"), LpExponent::infinity);
  EXPECT_EQ(parse_lp_exponent("infinity"), LpExponent::infinity);
  EXPECT_THROW(parse_lp_exponent("3"), InvalidArgument);
}

TEST(BesovNorm, ConstantLivesInLowBlock) {
  const GridSpec g = make_grid(std::numbers::pi, 64);
  const FilterBank bank(g);
  const Field c = Field::constant(g, -2.5);
  EXPECT_NEAR(besov_norm(c, BesovSpec::b0_inf_1(), bank).value, 2.5, 1e-14);
  EXPECT_NEAR(besov_norm(c, BesovSpec::b1_inf_1(), bank).value, 2.5 * 0.5, 1e-14);
  EXPECT_NEAR(besov_norm(c, BesovSpec::log_inf(1.0), bank).value, 2.5 * 0.5, 1e-14);
  EXPECT_EQ(besov_norm(Field::zeros(g), BesovSpec::b1_inf_1(), bank).value, 0.0);
}

TEST(BesovNorm, PlateauModeHitsOneBlock) {
  // xi = 12 = 1.5 * 2^3 sits where phi(2^{-3} .) = 1 and every other block vanishes.
  const GridSpec g = make_grid(std::numbers::pi, 256);
  const FilterBank bank(g);
  const Field f = Field::sample(g, [](double x) { return std::cos(12.0 * x); });
  const NormReport b1 = besov_norm(f, BesovSpec::b1_inf_1(), bank);
  EXPECT_NEAR(b1.value, 8.0, 1e-12);
  EXPECT_NEAR(besov_norm(f, BesovSpec::log_inf(1.0), bank).value, 24.0, 1e-12);
  const BesovSpec l2{0.0, LpExponent::two, LpExponent::one, false};
  EXPECT_NEAR(besov_norm(f, l2, bank).value, std::sqrt(std::numbers::pi), 1e-12);
}

TEST(BesovNorm, GaussianAgreesWithAnalyticTransformOracle) {
  const GridSpec g = make_grid(16.0, 1024);
  const FilterBank bank(g);
  const Field f = Field::sample(g, [](double x) { return std::exp(-x * x); });
  const NormReport rep = besov_norm(f, BesovSpec::b0_inf_1(), bank, BlockSampling{true, 32});
  double total = 0.0;
  for (const auto& [j, v] : rep.per_block) {
    if (j > 5) break;
    const double ref = gaussian_block_sup(j, g);
    EXPECT_NEAR(v, ref, 1e-10) << j;
    total += ref;
  }
  EXPECT_NEAR(rep.value, total, 1e-9);
}

TEST(BesovNorm, CombineHonoursSummability) {
  const std::vector<std::pair<int, double>> blocks{{-1, 1.0}, {0, 3.0}, {1, 2.0}};
  EXPECT_DOUBLE_EQ(NormReport::combine(blocks, LpExponent::one), 6.0);
  EXPECT_DOUBLE_EQ(NormReport::combine(blocks, LpExponent::infinity), 3.0);
  EXPECT_DOUBLE_EQ(NormReport::combine(blocks, LpExponent::two), std::sqrt(14.0));
}

TEST(BesovNorm, MultiplierPathEqualsDifferentiatedField) {
  const GridSpec g = make_grid(std::numbers::pi, 512);
  const FilterBank bank(g);
  BlockNormEvaluator ev(bank);
  const Field f = Field::sample(g, [](double x) { return std::exp(std::cos(3.0 * x)); });
  const Multiplier dx = [](double xi) { return cplx{0.0, xi}; };
  const double a = besov_norm(f.spectrum(), BesovSpec::b0_inf_1(), ev, &dx).value;
  const double b = besov_norm(derivative(f), BesovSpec::b0_inf_1(), bank).value;
  EXPECT_NEAR(a, b, 1e-12 * b);
}

TEST(Energy, H1AndLipschitzOfSine) {
  const GridSpec g = make_grid(std::numbers::pi, 64);
  const Field f = Field::sample(g, [](double x) { return std::sin(x); });
  EXPECT_NEAR(h1_energy(f), 2.0 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(lipschitz_norm(f), 2.0, 1e-12);
}
