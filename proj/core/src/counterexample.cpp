#include "besovch/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "besovch/besov.hpp"
#include "besovch/error.hpp"

namespace besovch {

CounterexampleParams CounterexampleParams::standard(int N) {
  if (N < 1 || N > kMaxStaticN) {
    throw CapacityError("N = " + std::to_string(N) + " outside the supported range 1.." + std::to_string(kMaxStaticN));
  }
  CounterexampleParams p;
  p.N = N;
  p.grid = make_grid(std::numbers::pi, std::size_t{1} << (N + 9));
  return p;
}

double CounterexampleParams::epsilon() const noexcept { return std::pow(static_cast<double>(N), -0.1); }

double CounterexampleParams::carrier() const noexcept { return std::ldexp(1.0, N + 5); }

std::size_t CounterexampleParams::carrier_index() const {
  const double k = carrier() * grid.half_length / std::numbers::pi;
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-9 * std::max(1.0, k)) {
    throw InvalidArgument("carrier 2^(N+5) is not on the frequency lattice of this grid");
  }
  return static_cast<std::size_t>(r);
}

void CounterexampleParams::validate() const {
  if (N < 1) throw InvalidArgument("N must be positive");
  (void)make_grid(grid.half_length, grid.n_points);
  if (!std::isfinite(jump_location)) throw InvalidArgument("jump_location must be finite");
  (void)carrier_index();
  if (std::ldexp(1.0, N + 6) * 8.0 / 3.0 > grid.nyquist()) {
    throw CapacityError("grid too small for the carrier and its products: need nyquist >= 2^(N+6) * 8/3");
  }
}

namespace {

cplx heaviside_coefficient(const GridSpec& grid, std::size_t k, double a) {
  const double L = grid.half_length;
  if (k == 0) return {0.25, 0.0};
  const double xi = grid.wavenumber(k);
  const cplx num = std::polar(1.0, -xi * a) - std::polar(1.0, -xi * (a + 0.5 * L));
  const cplx c = num / (cplx{0.0, xi} * (2.0 * L));
  return (k % 2 == 0) ? c : -c;
}

void require_capacity(int N, const FilterBank& bank) {
  if (N < 0 || N > bank.j_max()) {
    throw CapacityError("S_N needs j_max >= N; grid supports j_max = " + std::to_string(bank.j_max()));
  }
}

// Square of a real field whose spectrum sits in [kmin, kmin + band.size()) around the carrier k0.
// Writing f = e^{i k0 x} A + c.c. with A narrowband gives f^2 = e^{2 i k0 x} A^2 + c.c. + 2 |A|^2,
// so two short transforms replace two full-length ones. The result is exact (alias-free).
ComplexVector square_modulated(const GridSpec& grid, std::span<const cplx> band, std::size_t kmin, std::size_t k0) {
  if (band.empty()) return ComplexVector(grid.spectrum_size());
  const std::size_t kmax = kmin + band.size() - 1;
  if (kmin > k0 || kmax < k0) throw InvalidArgument("carrier outside the spectral band");
  const std::size_t B = std::max(k0 - kmin, kmax - k0);
  if (4 * B >= 2 * k0 || 2 * k0 + 2 * B >= grid.spectrum_size() - 1) {
    throw CapacityError("carrier band too wide for the modulated square");
  }
  std::size_t m = 16;
  while (m < 4 * B + 1) m *= 2;
  const auto wrap = [m](std::ptrdiff_t d) { return static_cast<std::size_t>((d % static_cast<std::ptrdiff_t>(m) + static_cast<std::ptrdiff_t>(m)) % static_cast<std::ptrdiff_t>(m)); };

  ComplexVector env(m), mod(m);
  for (std::size_t i = 0; i < band.size(); ++i) {
    env[wrap(static_cast<std::ptrdiff_t>(kmin + i) - static_cast<std::ptrdiff_t>(k0))] = band[i];
  }
  const ComplexFft fft(m);
  fft.inverse(env);
  for (std::size_t s = 0; s < m; ++s) {
    mod[s] = std::norm(env[s]);
    env[s] *= env[s];
  }
  fft.forward(env);
  fft.forward(mod);

  ComplexVector out(grid.spectrum_size());
  const auto b = static_cast<std::ptrdiff_t>(B);
  for (std::ptrdiff_t d = -2 * b; d <= 2 * b; ++d) {
    out[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(2 * k0) + d)] = env[wrap(d)];
  }
  for (std::size_t K = 0; K <= 2 * B; ++K) out[K] += 2.0 * mod[K];
  out[0].imag(0.0);
  return out;
}

}  // namespace

ComplexVector heaviside_spectrum(const GridSpec& grid, double jump_location) {
  ComplexVector out(grid.spectrum_size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = heaviside_coefficient(grid, k, jump_location);
  out.back().imag(0.0);
  return out;
}

Field heaviside_partial_sum(int N, const GridSpec& grid, const FilterBank& bank, double jump_location) {
  if (!(bank.grid() == grid)) throw InvalidArgument("filter bank grid differs from the requested grid");
  require_capacity(N, bank);
  ComplexVector out(grid.spectrum_size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double w = bank.low_pass_weight(N, k);
    if (w != 0.0) out[k] = w * heaviside_coefficient(grid, k, jump_location);
  }
  return Field::from_spectrum(grid, std::move(out));
}

ComplexVector u0_spectrum(const CounterexampleParams& params) {
  params.validate();
  const GridSpec& grid = params.grid;
  const FilterBank bank(grid);
  require_capacity(params.N, bank);
  const double eps = params.epsilon();
  const std::size_t k0 = params.carrier_index();

  // Spectrum of g = 1 + eps S_N h, which lives on indices [0, band).
  const IndexRange low = bank.block_support(params.N - 1);
  std::size_t band = std::max<std::size_t>(low.end, 1);
  while (band < grid.spectrum_size() && bank.low_pass_weight(params.N, band) != 0.0) ++band;
  if (band >= k0) throw CapacityError("S_N h band reaches the carrier frequency");
  std::vector<cplx> g(band);
  for (std::size_t q = 0; q < band; ++q) {
    const double w = bank.low_pass_weight(params.N, q);
    g[q] = w == 0.0 ? cplx{} : eps * w * heaviside_coefficient(grid, q, params.jump_location);
  }
  g[0] += 1.0;

  // cos(k0 x) g: the mode k0 + q takes g_q / 2 and k0 - q takes conj(g_q) / 2.
  ComplexVector u(grid.spectrum_size());
  for (std::size_t q = 0; q < band; ++q) {
    u[k0 + q] += 0.5 * g[q];
    if (q > 0) u[k0 - q] += 0.5 * std::conj(g[q]);
  }
  for (std::size_t k = k0 + 1 - band; k < k0 + band; ++k) {
    const double xi = grid.wavenumber(k);
    u[k] *= -eps * cplx{0.0, xi / (1.0 + xi * xi)};
  }
  return u;
}

Field build_u0(const CounterexampleParams& params) { return Field::from_spectrum(params.grid, u0_spectrum(params)); }

Field build_E0(const Field& u0) {
  const Field ux = derivative(u0);
  const Field sq = product(ux, ux, true);
  return apply_multiplier(sq, [](double xi) { return cplx{0.0, -0.5 * xi / (1.0 + xi * xi)}; });
}

SlopeFit fit_log2_slope(std::span<const double> ns, std::span<const double> values) {
  if (ns.size() != values.size() || ns.size() < 2) throw InvalidArgument("slope fit needs >= 2 matching points");
  const std::size_t m = ns.size();
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(ns[i] > 0.0) || !(values[i] > 0.0)) throw InvalidArgument("slope fit needs positive data");
    x[i] = std::log2(ns[i]);
    y[i] = std::log2(values[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("slope fit needs distinct abscissae");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(m));
  return fit;
}

ScalingRecord scaling_record(int N, const ScalingOptions& options) {
  CounterexampleParams params = CounterexampleParams::standard(N);
  params.jump_location = options.jump_location;
  const GridSpec& grid = params.grid;
  const FilterBank bank(grid);
  ScalingRecord rec;
  rec.N = N;
  rec.n_points = grid.n_points;

  ComplexVector u = u0_spectrum(params);
  const Multiplier dx = [](double xi) { return cplx{0.0, xi}; };
  {
    BlockNormEvaluator ev(bank, options.sampling);
    const auto blocks = ev.norms(u, LpExponent::infinity);
    const NormReport b1 = report_from_blocks(blocks, BesovSpec::b1_inf_1());
    rec.u0_b1_inf_1 = b1.value;
    rec.u0_log_b1 = report_from_blocks(blocks, BesovSpec::log_inf(1.0)).value;
    double top = 0.0;
    for (const auto& [j, c] : b1.per_block) top = std::max(top, c);
    rec.active_j_min = bank.j_max();
    rec.active_j_max = -1;
    for (const auto& [j, c] : b1.per_block) {
      if (c >= 1e-3 * top) {
        rec.active_j_min = std::min(rec.active_j_min, j);
        rec.active_j_max = std::max(rec.active_j_max, j);
      }
    }
    rec.u0x_b0 = report_from_blocks(ev.norms(u, LpExponent::infinity, &dx), BesovSpec::b0_inf_1()).value;
  }

  // Keep only the carrier band of u0_x, then release the full spectrum.
  std::size_t kmin = 0;
  while (kmin < u.size() && u[kmin] == cplx{}) ++kmin;
  std::size_t kmax = u.size();
  while (kmax > kmin && u[kmax - 1] == cplx{}) --kmax;
  std::vector<cplx> ux_band(kmax - kmin);
  for (std::size_t k = kmin; k < kmax; ++k) ux_band[k - kmin] = cplx{0.0, grid.wavenumber(k)} * u[k];
  ComplexVector().swap(u);
  const ComplexVector sq = square_modulated(grid, ux_band, kmin, params.carrier_index());
  {
    BlockNormEvaluator ev(bank, options.sampling);
    rec.u0x2_b0 = report_from_blocks(ev.norms(sq, LpExponent::infinity), BesovSpec::b0_inf_1()).value;
    const Multiplier e0 = [](double xi) { return cplx{0.0, -0.5 * xi / (1.0 + xi * xi)}; };
    rec.e0_b1_inf_1 = report_from_blocks(ev.norms(sq, LpExponent::infinity, &e0), BesovSpec::b1_inf_1()).value;
  }
  rec.algebra_ratio = rec.u0x2_b0 / (rec.u0x_b0 * rec.u0x_b0);
  return rec;
}

ScalingReport algebra_failure_experiment(std::vector<int> n_list, const ScalingOptions& options) {
  if (n_list.size() < 2) throw InvalidArgument("the N ladder needs at least two entries");
  std::sort(n_list.begin(), n_list.end());
  if (std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end()) {
    throw InvalidArgument("the N ladder contains duplicates");
  }
  ScalingReport rep;
  for (int N : n_list) rep.records.push_back(scaling_record(N, options));
  std::vector<double> ns, a, b, c, d, e, f;
  for (const auto& r : rep.records) {
    ns.push_back(r.N);
    a.push_back(r.u0_b1_inf_1);
    b.push_back(r.u0_log_b1);
    c.push_back(r.u0x_b0);
    d.push_back(r.u0x2_b0);
    e.push_back(r.algebra_ratio);
    f.push_back(r.e0_b1_inf_1);
  }
  rep.u0_b1_inf_1 = fit_log2_slope(ns, a);
  rep.u0_log_b1 = fit_log2_slope(ns, b);
  rep.u0x_b0 = fit_log2_slope(ns, c);
  rep.u0x2_b0 = fit_log2_slope(ns, d);
  rep.algebra_ratio = fit_log2_slope(ns, e);
  rep.e0_b1_inf_1 = fit_log2_slope(ns, f);
  return rep;
}

HeavisideCalibration heaviside_calibration(int N, const BlockSampling& sampling) {
  if (N < 1 || N > 22) throw CapacityError("calibration N must lie in 1..22");
  const GridSpec grid = make_grid(std::numbers::pi, std::size_t{1} << (N + 4));
  const FilterBank bank(grid);
  const Field snh = heaviside_partial_sum(N, grid, bank);
  BlockNormEvaluator ev(bank, sampling);
  const auto blocks = ev.norms(snh.spectrum(), LpExponent::infinity);
  HeavisideCalibration cal;
  cal.N = N;
  cal.snh_b0 = report_from_blocks(blocks, BesovSpec::b0_inf_1()).value;
  cal.per_n = cal.snh_b0 / N;
  cal.h_blocks.assign(blocks.begin(), blocks.begin() + std::min<std::ptrdiff_t>(N + 2, std::ssize(blocks)));
  return cal;
}

}  // namespace besovch
