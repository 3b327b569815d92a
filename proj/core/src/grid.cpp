#include "besovch/grid.hpp"

#include <algorithm>
#include <string>

#include "besovch/error.hpp"

namespace besovch {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

GridSpec make_grid(double half_length, std::size_t n_points) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw InvalidArgument("grid half-length must be positive and finite, got " + std::to_string(half_length));
  }
  if (!is_power_of_two(n_points) || n_points < 16) {
    throw InvalidArgument("grid point count must be a power of two >= 16, got " + std::to_string(n_points));
  }
  return GridSpec{half_length, n_points};
}

std::size_t index_at_or_below(const GridSpec& grid, double xi) noexcept {
  if (!(xi > 0.0)) return 0;
  const double k = std::floor(xi * grid.half_length / std::numbers::pi);
  const double top = static_cast<double>(grid.n_points / 2);
  return static_cast<std::size_t>(std::min(k, top));
}

Field::Field(const GridSpec& grid, RealVector samples, ComplexVector spectrum)
    : grid_(grid), samples_(std::move(samples)), spectrum_(std::move(spectrum)) {}

Field Field::from_samples(const GridSpec& grid, RealVector samples) {
  if (samples.size() != grid.n_points) {
    throw InvalidArgument("sample count " + std::to_string(samples.size()) + " does not match grid size " +
                          std::to_string(grid.n_points));
  }
  for (double v : samples) {
    if (!std::isfinite(v)) throw NumericalError("field samples must be finite");
  }
  ComplexVector spectrum(grid.spectrum_size());
  RealFft(grid.n_points).forward(samples, spectrum);
  return Field(grid, std::move(samples), std::move(spectrum));
}

Field Field::from_samples(const GridSpec& grid, std::span<const double> samples) {
  return from_samples(grid, RealVector(samples.begin(), samples.end()));
}

Field Field::from_spectrum(const GridSpec& grid, ComplexVector spectrum) {
  if (spectrum.size() != grid.spectrum_size()) {
    throw InvalidArgument("spectrum length does not match grid");
  }
  // DC and Nyquist coefficients of a real signal are real.
  spectrum.front().imag(0.0);
  spectrum.back().imag(0.0);
  RealVector samples(grid.n_points);
  RealFft(grid.n_points).inverse(spectrum, samples);
  for (double v : samples) {
    if (!std::isfinite(v)) throw NumericalError("field spectrum produced non-finite samples");
  }
  return Field(grid, std::move(samples), std::move(spectrum));
}

Field Field::zeros(const GridSpec& grid) {
  return Field(grid, RealVector(grid.n_points, 0.0), ComplexVector(grid.spectrum_size(), cplx{}));
}

Field Field::constant(const GridSpec& grid, double value) {
  ComplexVector spectrum(grid.spectrum_size(), cplx{});
  spectrum[0] = value;
  return Field(grid, RealVector(grid.n_points, value), std::move(spectrum));
}

double Field::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

Field Field::scaled(double a) const {
  RealVector s(samples_);
  for (auto& v : s) v *= a;
  ComplexVector c(spectrum_);
  for (auto& v : c) v *= a;
  return Field(grid_, std::move(s), std::move(c));
}

namespace {
void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("fields live on different grids");
}
}  // namespace

Field operator+(const Field& a, const Field& b) {
  require_same_grid(a, b);
  RealVector s(a.samples_);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] += b.samples_[i];
  ComplexVector c(a.spectrum_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.spectrum_[i];
  return Field(a.grid_, std::move(s), std::move(c));
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a, b);
  RealVector s(a.samples_);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] -= b.samples_[i];
  ComplexVector c(a.spectrum_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.spectrum_[i];
  return Field(a.grid_, std::move(s), std::move(c));
}

void apply_multiplier_inplace(const GridSpec& grid, std::span<cplx> spectrum, const Multiplier& m) {
  const std::size_t half = grid.n_points / 2;
  for (std::size_t k = 0; k < half; ++k) {
    const cplx w = m(grid.wavenumber(k));
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
      throw NumericalError("multiplier is not finite at xi = " + std::to_string(grid.wavenumber(k)));
    }
    spectrum[k] *= w;
  }
  // The unpaired mode sits at xi = -nyquist on the lattice [-n/2, n/2).
  const cplx w = m(-grid.wavenumber(half));
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
    throw NumericalError("multiplier is not finite at the Nyquist mode");
  }
  spectrum[half] *= w.real();
  spectrum[0].imag(0.0);
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
  ComplexVector spectrum(f.spectrum().begin(), f.spectrum().end());
  apply_multiplier_inplace(f.grid(), spectrum, m);
  return Field::from_spectrum(f.grid(), std::move(spectrum));
}

Field derivative(const Field& f) {
  return apply_multiplier(f, [](double xi) { return cplx(0.0, xi); });
}

Field helmholtz_inv(const Field& f) {
  return apply_multiplier(f, [](double xi) { return cplx(1.0 / (1.0 + xi * xi), 0.0); });
}

Field helmholtz_inv_dx(const Field& f) {
  return apply_multiplier(f, [](double xi) { return cplx(0.0, xi / (1.0 + xi * xi)); });
}

std::size_t two_thirds_cutoff(std::size_t n_points) noexcept { return n_points / 3; }

void truncate_two_thirds(std::span<cplx> spectrum) noexcept {
  const std::size_t n = 2 * (spectrum.size() - 1);
  const std::size_t cut = two_thirds_cutoff(n);
  for (std::size_t k = cut + 1; k < spectrum.size(); ++k) spectrum[k] = cplx{};
}

Field product(const Field& f, const Field& g, bool dealias) {
  require_same_grid(f, g);
  const GridSpec& grid = f.grid();
  const RealFft fft(grid.n_points);
  RealVector a(grid.n_points);
  RealVector b(grid.n_points);
  if (dealias) {
    ComplexVector fs(f.spectrum().begin(), f.spectrum().end());
    ComplexVector gs(g.spectrum().begin(), g.spectrum().end());
    truncate_two_thirds(fs);
    truncate_two_thirds(gs);
    fft.inverse_destructive(fs, a);
    fft.inverse_destructive(gs, b);
  } else {
    std::copy(f.samples().begin(), f.samples().end(), a.begin());
    std::copy(g.samples().begin(), g.samples().end(), b.begin());
  }
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  ComplexVector out(grid.spectrum_size());
  fft.forward(a, out);
  if (dealias) truncate_two_thirds(out);
  return Field::from_spectrum(grid, std::move(out));
}

Field shift(const Field& f, std::ptrdiff_t cells) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  const std::ptrdiff_t s = ((cells % n) + n) % n;
  RealVector out(f.size());
  for (std::ptrdiff_t m = 0; m < n; ++m) out[static_cast<std::size_t>((m + s) % n)] = f[static_cast<std::size_t>(m)];
  return Field::from_samples(f.grid(), std::move(out));
}

Field resample(const Field& f, std::size_t n_points) {
  if (n_points == f.size()) return f;
  const GridSpec target = make_grid(f.grid().half_length, n_points);
  ComplexVector out(target.spectrum_size());
  const std::size_t src_half = f.size() / 2;
  const std::size_t dst_half = n_points / 2;
  const std::size_t keep = std::min(src_half, dst_half);
  for (std::size_t k = 0; k < keep; ++k) out[k] = f.spectrum()[k];
  // A source Nyquist mode splits evenly between +k and -k on the larger grid.
  if (dst_half > src_half) out[src_half] = 0.5 * f.spectrum()[src_half];
  return Field::from_spectrum(target, std::move(out));
}

double integral(const Field& f) noexcept { return f.spectrum()[0].real() * f.grid().length(); }

}  // namespace besovch
