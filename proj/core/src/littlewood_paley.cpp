#include "besovch/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "besovch/error.hpp"

namespace besovch {

double smooth_step(double t) noexcept {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double chi(double xi) noexcept { return 1.0 - smooth_step(3.0 * (std::abs(xi) - 1.0)); }

double phi(double xi) noexcept { return chi(0.5 * xi) - chi(xi); }

FilterBank::FilterBank(const GridSpec& grid) : grid_(grid), j_max_(-1) {
  constexpr double kTop = 8.0 / 3.0;
  if (grid.nyquist() < kTop) {
    throw CapacityError("grid nyquist " + std::to_string(grid.nyquist()) + " cannot host the j = 0 block");
  }
  while (std::ldexp(kTop, j_max_ + 1) <= grid.nyquist()) ++j_max_;
  const IndexRange r = block_support(-1);
  chi_samples_.resize(r.end);
  for (std::size_t k = 0; k < r.end; ++k) chi_samples_[k] = chi(grid_.wavenumber(k));
}

double FilterBank::covered_wavenumber() const noexcept { return std::ldexp(1.0, j_max_ + 1); }

double FilterBank::block_weight(int j, std::size_t k) const noexcept {
  if (j < -1 || j > j_max_) return 0.0;
  const double xi = grid_.wavenumber(k);
  if (j == -1) return k < chi_samples_.size() ? chi_samples_[k] : 0.0;
  return phi(std::ldexp(xi, -j));
}

double FilterBank::low_pass_weight(int j, std::size_t k) const noexcept {
  if (j <= -1) return 0.0;
  // S_j = chi(2^{-j} .) telescopes; blocks above j_max are dropped.
  const int top = std::min(j, j_max_ + 1);
  return chi(std::ldexp(grid_.wavenumber(k), -top));
}

IndexRange FilterBank::block_support(int j) const noexcept {
  if (j < -1 || j > j_max_) return {};
  if (j == -1) return {0, index_at_or_below(grid_, 4.0 / 3.0) + 1};
  const std::size_t lo = index_at_or_below(grid_, std::ldexp(1.0, j));
  const std::size_t hi = index_at_or_below(grid_, std::ldexp(8.0 / 3.0, j));
  return {lo, std::min(hi + 1, grid_.spectrum_size())};
}

Field DyadicDecomposition::sum() const {
  if (blocks.empty()) throw InvalidArgument("empty decomposition");
  ComplexVector acc(blocks.front().spectrum().size(), cplx{});
  for (const auto& b : blocks) {
    const auto s = b.spectrum();
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += s[k];
  }
  return Field::from_spectrum(blocks.front().grid(), std::move(acc));
}

void block_spectrum(const FilterBank& bank, int j, std::span<const cplx> in, std::span<cplx> out) {
  std::fill(out.begin(), out.end(), cplx{});
  const IndexRange r = bank.block_support(j);
  for (std::size_t k = r.begin; k < r.end; ++k) out[k] = bank.block_weight(j, k) * in[k];
}

Field block(const Field& f, int j, const FilterBank& bank) {
  if (!(f.grid() == bank.grid())) throw InvalidArgument("field and filter bank grids differ");
  ComplexVector out(f.spectrum().size());
  block_spectrum(bank, j, f.spectrum(), out);
  return Field::from_spectrum(f.grid(), std::move(out));
}

Field low_pass(const Field& f, int j, const FilterBank& bank) {
  if (!(f.grid() == bank.grid())) throw InvalidArgument("field and filter bank grids differ");
  ComplexVector out(f.spectrum().begin(), f.spectrum().end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double w = bank.low_pass_weight(j, k);
    out[k] = w == 0.0 ? cplx{} : out[k] * w;
  }
  return Field::from_spectrum(f.grid(), std::move(out));
}

DyadicDecomposition decompose(const Field& f, const FilterBank& bank) {
  DyadicDecomposition d;
  d.blocks.reserve(static_cast<std::size_t>(bank.block_count()));
  for (int j = -1; j <= bank.j_max(); ++j) d.blocks.push_back(block(f, j, bank));
  return d;
}

namespace {

// Physical samples of each block of the 2/3-truncated field, indexed j + 1.
std::vector<RealVector> truncated_block_samples(const Field& f, const FilterBank& bank) {
  const GridSpec& grid = f.grid();
  const RealFft fft(grid.n_points);
  ComplexVector trunc(f.spectrum().begin(), f.spectrum().end());
  truncate_two_thirds(trunc);
  std::vector<RealVector> out;
  ComplexVector work(grid.spectrum_size());
  for (int j = -1; j <= bank.j_max(); ++j) {
    block_spectrum(bank, j, trunc, work);
    RealVector s(grid.n_points);
    fft.inverse_destructive(work, s);
    out.push_back(std::move(s));
  }
  return out;
}

Field finish_dealiased(const GridSpec& grid, const RealVector& acc) {
  ComplexVector out(grid.spectrum_size());
  RealFft(grid.n_points).forward(acc, out);
  truncate_two_thirds(out);
  return Field::from_spectrum(grid, std::move(out));
}

void require_bank(const Field& f, const Field& g, const FilterBank& bank) {
  if (!(f.grid() == bank.grid()) || !(g.grid() == bank.grid())) {
    throw InvalidArgument("fields and filter bank must share a grid");
  }
}

}  // namespace

Field paraproduct(const Field& f, const Field& g, const FilterBank& bank) {
  require_bank(f, g, bank);
  const auto fb = truncated_block_samples(f, bank);
  const auto gb = truncated_block_samples(g, bank);
  const std::size_t n = f.size();
  RealVector acc(n, 0.0);
  RealVector low(n, 0.0);  // running S_{j-1} f
  for (int j = 1; j <= bank.j_max(); ++j) {
    const auto& prev = fb[static_cast<std::size_t>(j - 1)];  // Delta_{j-2} f joins S_{j-1}
    const auto& gj = gb[static_cast<std::size_t>(j + 1)];
    for (std::size_t m = 0; m < n; ++m) {
      low[m] += prev[m];
      acc[m] += low[m] * gj[m];
    }
  }
  return finish_dealiased(f.grid(), acc);
}

Field remainder(const Field& f, const Field& g, const FilterBank& bank) {
  require_bank(f, g, bank);
  const auto fb = truncated_block_samples(f, bank);
  const auto gb = truncated_block_samples(g, bank);
  const std::size_t n = f.size();
  const int count = bank.block_count();
  RealVector acc(n, 0.0);
  for (int i = 0; i < count; ++i) {
    const auto& fi = fb[static_cast<std::size_t>(i)];
    for (int d = -1; d <= 1; ++d) {
      const int jp = i + d;
      if (jp < 0 || jp >= count) continue;
      const auto& gj = gb[static_cast<std::size_t>(jp)];
      for (std::size_t m = 0; m < n; ++m) acc[m] += fi[m] * gj[m];
    }
  }
  return finish_dealiased(f.grid(), acc);
}

Field commutator_rj(const Field& f, const Field& g, int j, const FilterBank& bank) {
  require_bank(f, g, bank);
  const Field gx = derivative(g);
  return block(product(f, gx), j, bank) - product(f, block(gx, j, bank));
}

BlockNormEvaluator::BlockNormEvaluator(const FilterBank& bank, BlockSampling sampling)
    : bank_(&bank), sampling_(sampling) {
  if (sampling_.samples_per_wavelength < 4) {
    throw InvalidArgument("block sampling needs at least 4 samples per wavelength");
  }
}

std::size_t BlockNormEvaluator::sampling_size(int j) const noexcept {
  const std::size_t n = bank_->grid().n_points;
  if (sampling_.full_grid) return n;
  const IndexRange r = bank_->block_support(j);
  if (r.empty()) return 16;
  const std::size_t top = std::max<std::size_t>(r.end - 1, 1);
  std::size_t ns = 16;
  while (ns < n && ns < sampling_.samples_per_wavelength * top) ns *= 2;
  return std::min(ns, n);
}

double BlockNormEvaluator::block_norm(std::span<const cplx> spectrum, int j, LpExponent p, const Multiplier* m) {
  const GridSpec& grid = bank_->grid();
  const IndexRange r = bank_->block_support(j);
  if (r.empty()) return 0.0;
  const std::size_t half = grid.n_points / 2;

  auto coeff = [&](std::size_t k) {
    cplx c = spectrum[k] * bank_->block_weight(j, k);
    if (m != nullptr && c != cplx{}) {
      const cplx w = (*m)(grid.wavenumber(k));
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw NumericalError("non-finite multiplier value");
      c *= w;
    }
    return c;
  };

  if (p == LpExponent::two) {
    // Parseval on the full grid: dx * sum |g_m|^2 = 2L * sum_k |G_k|^2 over the two-sided lattice.
    double s = 0.0;
    for (std::size_t k = r.begin; k < r.end; ++k) {
      const double mult = (k == 0 || k == half) ? 1.0 : 2.0;
      s += mult * std::norm(coeff(k));
    }
    return std::sqrt(grid.length() * s);
  }

  // Trim the block to the band where the spectrum is nonzero.
  std::size_t kb = r.begin;
  std::size_t ke = r.end;
  while (kb < ke && spectrum[kb] == cplx{}) ++kb;
  while (ke > kb && spectrum[ke - 1] == cplx{}) --ke;
  if (kb == ke) return 0.0;
  const std::size_t ns = p == LpExponent::one ? grid.n_points : sampling_size(j);
  const double cell = grid.length() / static_cast<double>(ns);

  std::size_t nb = 16;
  while (nb < ke - kb) nb *= 2;
  if (kb >= 1 && ke <= ns / 2 && ns / nb >= kMinDecimation) {
    coeffs_.resize(ke - kb);
    for (std::size_t k = kb; k < ke; ++k) coeffs_[k - kb] = coeff(k);
    return narrowband_norm(kb, ns, nb, p) * (p == LpExponent::one ? cell : 1.0);
  }

  const std::size_t ms = ns / 2 + 1;
  if (work_.size() < ms) work_.resize(ms);
  if (out_.size() < ns) out_.resize(ns);
  std::span<cplx> work(work_.data(), ms);
  std::span<double> out(out_.data(), ns);
  std::fill(work.begin(), work.end(), cplx{});
  for (std::size_t k = kb; k < ke; ++k) work[k] = coeff(k);
  RealFft(ns).inverse_destructive(work, out);
  if (p == LpExponent::infinity) {
    double sup = 0.0;
    for (double v : out) sup = std::max(sup, std::abs(v));
    return sup;
  }
  double s = 0.0;
  for (double v : out) s += std::abs(v);
  return s * cell;
}

double BlockNormEvaluator::narrowband_norm(std::size_t kb, std::size_t ns, std::size_t nb, LpExponent p) {
  // Sample m = r + P s of the real block is 2 Re sum_k c_k e^{2 pi i k r / ns} e^{2 pi i k s / nb}
  // with P = ns / nb, so each residue r costs one complex transform of length nb.
  const std::size_t width = coeffs_.size();
  const std::size_t stride = ns / nb;
  const ComplexFft fft(nb);
  if (band_.size() < nb) band_.resize(nb);
  std::span<cplx> buf(band_.data(), nb);
  std::vector<cplx> step(width), twiddle(width);
  const double turn = 2.0 * std::numbers::pi / static_cast<double>(ns);
  for (std::size_t i = 0; i < width; ++i) step[i] = std::polar(1.0, turn * static_cast<double>((kb + i) % ns));

  double sup = 0.0;
  double sum = 0.0;
  for (std::size_t r = 0; r < stride; ++r) {
    if (r % 16 == 0) {
      // Re-anchor the recurrence with exact phases so rounding cannot drift.
      for (std::size_t i = 0; i < width; ++i) {
        const auto phase = static_cast<double>(((kb + i) * r) % ns);
        twiddle[i] = std::polar(1.0, turn * phase);
      }
    }
    std::fill(buf.begin(), buf.end(), cplx{});
    for (std::size_t i = 0; i < width; ++i) buf[(kb + i) % nb] = coeffs_[i] * twiddle[i];
    fft.inverse(buf);
    for (const cplx& z : buf) {
      const double v = std::abs(2.0 * z.real());
      sup = std::max(sup, v);
      sum += v;
    }
    for (std::size_t i = 0; i < width; ++i) twiddle[i] *= step[i];
  }
  return p == LpExponent::infinity ? sup : sum;
}

std::vector<double> BlockNormEvaluator::norms(std::span<const cplx> spectrum, LpExponent p, const Multiplier* m) {
  const GridSpec& grid = bank_->grid();
  if (spectrum.size() != grid.spectrum_size()) throw InvalidArgument("spectrum does not match the filter bank grid");
  std::vector<double> result;
  result.reserve(static_cast<std::size_t>(bank_->block_count()));
  for (int j = -1; j <= bank_->j_max(); ++j) result.push_back(block_norm(spectrum, j, p, m));
  return result;
}

}  // namespace besovch
