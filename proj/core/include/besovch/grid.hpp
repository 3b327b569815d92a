#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>

#include "besovch/fft.hpp"

namespace besovch {

/// Uniform periodic grid on [-L, L) with n points (n a power of two, n >= 16).
///
/// Sample points are x_m = -L + 2 L m / n. The half-complex spectrum index k = 0..n/2 carries the
/// wavenumber xi_k = pi k / L; index n/2 is the unpaired Nyquist mode.
struct GridSpec {
  double half_length = std::numbers::pi;
  std::size_t n_points = 16;

  double length() const noexcept { return 2.0 * half_length; }
  double dx() const noexcept { return length() / static_cast<double>(n_points); }
  double nyquist() const noexcept { return std::numbers::pi * static_cast<double>(n_points) / length(); }
  double x(std::size_t m) const noexcept { return -half_length + dx() * static_cast<double>(m); }
  double wavenumber(std::size_t k) const noexcept {
    return std::numbers::pi * static_cast<double>(k) / half_length;
  }
  std::size_t spectrum_size() const noexcept { return n_points / 2 + 1; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

bool is_power_of_two(std::size_t n) noexcept;

/// Validated constructor; throws InvalidArgument for L <= 0 or n not a power of two >= 16.
GridSpec make_grid(double half_length, std::size_t n_points);

/// Half-complex spectrum index of the largest lattice wavenumber <= xi (clamped to [0, n/2]).
std::size_t index_at_or_below(const GridSpec& grid, double xi) noexcept;

/// Real periodic field on a grid, holding both its samples and its half-complex spectrum.
///
/// Immutable after construction, so instances can be shared between threads freely. The spectrum
/// uses the RealFft convention: samples f_m = sum_k F_k e^{2 pi i k m / n}.
class Field {
 public:
  static Field from_samples(const GridSpec& grid, RealVector samples);
  static Field from_samples(const GridSpec& grid, std::span<const double> samples);
  static Field from_spectrum(const GridSpec& grid, ComplexVector spectrum);
  static Field zeros(const GridSpec& grid);
  static Field constant(const GridSpec& grid, double value);

  template <class F>
  static Field sample(const GridSpec& grid, F&& f) {
    RealVector s(grid.n_points);
    for (std::size_t m = 0; m < grid.n_points; ++m) s[m] = f(grid.x(m));
    return from_samples(grid, std::move(s));
  }

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.n_points; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<const cplx> spectrum() const noexcept { return spectrum_; }
  double operator[](std::size_t m) const noexcept { return samples_[m]; }

  double sup_norm() const noexcept;

  Field scaled(double a) const;
  friend Field operator+(const Field& a, const Field& b);
  friend Field operator-(const Field& a, const Field& b);

 private:
  Field(const GridSpec& grid, RealVector samples, ComplexVector spectrum);

  GridSpec grid_;
  RealVector samples_;
  ComplexVector spectrum_;
};

using Multiplier = std::function<cplx(double)>;

/// Spectral multiplier m(D): output spectrum m(xi_k) F_k. The unpaired Nyquist mode keeps only
/// the real part of m so the output stays real. Throws NumericalError on non-finite m values.
Field apply_multiplier(const Field& f, const Multiplier& m);

/// In-place variant on a raw half-complex spectrum.
void apply_multiplier_inplace(const GridSpec& grid, std::span<cplx> spectrum, const Multiplier& m);

/// Spectral d/dx (Nyquist mode zeroed).
Field derivative(const Field& f);

/// (1 - d_xx)^{-1}, multiplier 1 / (1 + xi^2).
Field helmholtz_inv(const Field& f);

/// d_x (1 - d_xx)^{-1}, multiplier i xi / (1 + xi^2).
Field helmholtz_inv_dx(const Field& f);

/// Zero every mode with |k| > n/3 (the 2/3 rule).
void truncate_two_thirds(std::span<cplx> spectrum) noexcept;
std::size_t two_thirds_cutoff(std::size_t n_points) noexcept;

/// Pointwise product f g. With `dealias`, both factors and the result are truncated by the 2/3 rule.
Field product(const Field& f, const Field& g, bool dealias = true);

/// Circular shift by `cells` grid cells: out(x) = f(x - cells * dx).
Field shift(const Field& f, std::ptrdiff_t cells);

/// Same field on an n_points grid of equal length: the spectrum is truncated (|k| < n_points/2) or zero-padded.
Field resample(const Field& f, std::size_t n_points);

/// Spectral quadrature of the integral over [-L, L).
double integral(const Field& f) noexcept;

}  // namespace besovch
