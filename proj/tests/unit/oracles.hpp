#pragma once

// Reference computations that deliberately avoid the library's FFT path.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "besovch/grid.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Half-complex coefficients by an O(n^2) sum, F_k = (1/n) sum_m f_m e^{-2 pi i k m / n}.
inline std::vector<cplx> dft(const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<cplx> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>((k * m) % n) / static_cast<double>(n);
      acc += f[m] * cplx{std::cos(a), std::sin(a)};
    }
    out[k] = acc / static_cast<double>(n);
  }
  return out;
}

// Samples of sum_k c_k m(xi_k) e^{i xi_k (x - x_0)} plus conjugates; the Nyquist term keeps Re m.
template <class M>
std::vector<double> synthesize(const besovch::GridSpec& g, const std::vector<cplx>& c, M m) {
  const std::size_t n = g.n_points;
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    cplx w = c[k] * m(g.wavenumber(k));
    if (k == n / 2) w = c[k] * m(g.wavenumber(k)).real();
    if (w == cplx{}) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>((k * j) % n) / static_cast<double>(n);
      const cplx term = w * cplx{std::cos(a), std::sin(a)};
      out[j] += (k == 0 || k == n / 2) ? term.real() : 2.0 * term.real();
    }
  }
  return out;
}

inline double max_abs_diff(const std::vector<double>& a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double max_abs(std::span<const double> a) {
  double d = 0.0;
  for (double v : a) d = std::max(d, std::abs(v));
  return d;
}

}  // namespace oracle
