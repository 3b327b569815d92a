#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "besovch/besov.hpp"
#include "besovch/ch_solver.hpp"
#include "besovch/counterexample.hpp"
#include "besovch/fft.hpp"
#include "besovch/littlewood_paley.hpp"
#include "besovch/peakon.hpp"

using namespace besovch;

static void BM_RealFftPair(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const RealFft fft(n);
  RealVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(0.37 * static_cast<double>(i));
  ComplexVector spec(fft.spectrum_size());
  for (auto _ : state) {
    fft.forward(x, spec);
    fft.inverse_destructive(spec, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RealFftPair)->RangeMultiplier(4)->Range(1 << 12, 1 << 20)->Unit(benchmark::kMicrosecond);

// Sup norms of every block of the counterexample datum, the inner loop of the static ladder.
static void BM_CounterexampleBlockNorms(benchmark::State& state) {
  const auto params = CounterexampleParams::standard(static_cast<int>(state.range(0)));
  const ComplexVector spec = u0_spectrum(params);
  const FilterBank bank(params.grid);
  BlockNormEvaluator ev(bank);
  for (auto _ : state) benchmark::DoNotOptimize(ev.norms(spec, LpExponent::infinity));
}
BENCHMARK(BM_CounterexampleBlockNorms)->DenseRange(8, 14, 2)->Unit(benchmark::kMillisecond);

static void BM_ScalingRecord(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scaling_record(N));
}
BENCHMARK(BM_ScalingRecord)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_ChRhs(benchmark::State& state) {
  const GridSpec g = make_grid(std::numbers::pi, static_cast<std::size_t>(state.range(0)));
  const Field u = Field::sample(g, [](double x) { return 0.3 * std::sin(x) + 0.1 * std::cos(40.0 * x); });
  ChRhs rhs(g);
  ComplexVector out(g.spectrum_size());
  for (auto _ : state) {
    rhs.evaluate(u.spectrum(), out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ChRhs)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMicrosecond);

static void BM_MultipeakonRhs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  PeakonState s;
  for (std::size_t i = 0; i < n; ++i) {
    s.p.push_back(1.0 / (1.0 + static_cast<double>(i)));
    s.q.push_back(-10.0 + 20.0 * static_cast<double>(i) / static_cast<double>(n));
  }
  for (auto _ : state) benchmark::DoNotOptimize(multipeakon_rhs(s));
}
BENCHMARK(BM_MultipeakonRhs)->RangeMultiplier(4)->Range(4, 256);
BENCHMARK_MAIN();
