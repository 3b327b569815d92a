#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "besovch/grid.hpp"

namespace besovch {

/// Smooth step built from e^{-1/t}: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t) noexcept;

/// Low-frequency cutoff: 1 on |xi| <= 1, 0 on |xi| >= 4/3.
double chi(double xi) noexcept;

/// Annulus cutoff phi(xi) = chi(xi/2) - chi(xi), supported in 1 < |xi| < 8/3.
double phi(double xi) noexcept;

/// Half-open range [begin, end) of half-complex indices.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool empty() const noexcept { return begin >= end; }
  std::size_t size() const noexcept { return empty() ? 0 : end - begin; }
};

/// Dyadic multipliers on a grid's frequency lattice.
///
/// Block -1 is chi(xi); block j >= 0 is phi(2^{-j} xi). Only blocks whose annulus fits below the
/// Nyquist wavenumber are kept: j_max is the largest j with 2^j * 8/3 <= nyquist. Multipliers are
/// evaluated from the closed-form cutoff, so two banks on the same grid agree bit for bit.
class FilterBank {
 public:
  explicit FilterBank(const GridSpec& grid);

  const GridSpec& grid() const noexcept { return grid_; }
  int j_max() const noexcept { return j_max_; }
  int block_count() const noexcept { return j_max_ + 2; }

  /// Multiplier of Delta_j at half-complex index k; zero for j <= -2 and j > j_max.
  double block_weight(int j, std::size_t k) const noexcept;

  /// Multiplier of S_j = sum_{j' < j} Delta_{j'} at index k.
  double low_pass_weight(int j, std::size_t k) const noexcept;

  /// Indices outside which block j vanishes.
  IndexRange block_support(int j) const noexcept;

  /// chi sampled on the lattice indices of its support.
  std::span<const double> chi_samples() const noexcept { return chi_samples_; }

  /// Every lattice |xi| <= this value satisfies chi + sum_j phi_j = 1 exactly.
  double covered_wavenumber() const noexcept;

 private:
  GridSpec grid_;
  int j_max_;
  std::vector<double> chi_samples_;
};

/// Blocks Delta_{-1} f, ..., Delta_{j_max} f.
struct DyadicDecomposition {
  std::vector<Field> blocks;

  const Field& block(int j) const { return blocks.at(static_cast<std::size_t>(j + 1)); }
  int j_max() const noexcept { return static_cast<int>(blocks.size()) - 2; }
  Field sum() const;
};

/// out_k = w_j(k) in_k (and zero outside the block), on a half-complex spectrum.
void block_spectrum(const FilterBank& bank, int j, std::span<const cplx> in, std::span<cplx> out);

Field block(const Field& f, int j, const FilterBank& bank);
Field low_pass(const Field& f, int j, const FilterBank& bank);
DyadicDecomposition decompose(const Field& f, const FilterBank& bank);

/// Bony paraproduct T_f g = sum_j S_{j-1} f Delta_j g, products dealiased by the 2/3 rule.
Field paraproduct(const Field& f, const Field& g, const FilterBank& bank);

/// Bony remainder R(f, g) = sum_j sum_{|j'-j| <= 1} Delta_j f Delta_{j'} g, products dealiased.
Field remainder(const Field& f, const Field& g, const FilterBank& bank);

/// Commutator R_j = Delta_j(f g_x) - f Delta_j g_x, products dealiased.
Field commutator_rj(const Field& f, const Field& g, int j, const FilterBank& bank);

enum class LpExponent { one, two, infinity };

/// How block sup norms are sampled.
///
/// With `full_grid` every block is evaluated at all n grid points. Otherwise a block whose top
/// wavenumber index is K is evaluated on the coarsest power-of-two subgrid holding at least
/// `samples_per_wavelength` points per period of that top mode (never finer than the field's grid).
/// Subgrid points are grid points, so the subgrid value never exceeds the full-grid value.
struct BlockSampling {
  bool full_grid = false;
  std::size_t samples_per_wavelength = 32;
};

/// Per-block L^p norms evaluated straight from a spectrum with reusable scratch buffers.
///
/// Not thread-safe (owns scratch); use one evaluator per thread.
class BlockNormEvaluator {
 public:
  explicit BlockNormEvaluator(const FilterBank& bank, BlockSampling sampling = {});

  /// Returns ||Delta_j m(D) f||_{L^p} for j = -1..j_max (entry 0 is j = -1). `m` may be null.
  std::vector<double> norms(std::span<const cplx> spectrum, LpExponent p, const Multiplier* m = nullptr);

  const FilterBank& bank() const noexcept { return *bank_; }

  /// Grid size used for the sup norm of block j.
  std::size_t sampling_size(int j) const noexcept;

 private:
  double block_norm(std::span<const cplx> spectrum, int j, LpExponent p, const Multiplier* m);

  const FilterBank* bank_;
  BlockSampling sampling_;
  double narrowband_norm(std::size_t kb, std::size_t ns, std::size_t nb, LpExponent p);

  // Blocks whose nonzero band is at most 1/kMinDecimation of the sampling grid are evaluated by
  // decimation into short complex transforms instead of one long real transform.
  static constexpr std::size_t kMinDecimation = 8;

  ComplexVector work_;
  RealVector out_;
  ComplexVector band_;
  std::vector<cplx> coeffs_;
};

}  // namespace besovch
