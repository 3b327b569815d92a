#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <new>
#include <span>
#include <vector>

namespace besovch {

using cplx = std::complex<double>;

namespace detail {
void* fft_aligned_alloc(std::size_t bytes);
void fft_aligned_free(void* p) noexcept;
}  // namespace detail

// Allocator returning SIMD-aligned storage so buffers can be handed to the FFT backend directly.
template <class T>
struct FftAllocator {
  using value_type = T;

  FftAllocator() noexcept = default;
  template <class U>
  FftAllocator(const FftAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    if (n > std::numeric_limits<std::size_t>::max() / sizeof(T)) throw std::bad_array_new_length();
    return static_cast<T*>(detail::fft_aligned_alloc(n * sizeof(T)));
  }
  void deallocate(T* p, std::size_t) noexcept { detail::fft_aligned_free(p); }

  template <class U>
  bool operator==(const FftAllocator<U>&) const noexcept {
    return true;
  }
};

using RealVector = std::vector<double, FftAllocator<double>>;
using ComplexVector = std::vector<cplx, FftAllocator<cplx>>;

/// Real <-> half-complex transform of a fixed length n (n >= 2, even).
///
/// Conventions: `forward` produces F_k = (1/n) sum_m f_m e^{-2 pi i k m / n} for k = 0..n/2, so
/// that f_m = sum_{k=-n/2}^{n/2-1} F_k e^{2 pi i k m / n} with F_{-k} = conj(F_k). `inverse` is the
/// exact inverse of `forward`.
///
/// Plans are created once per length with deterministic planning flags and shared process-wide;
/// executing a transform is thread-safe.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<cplx> out) const;

  // `in` is used as scratch and its contents are unspecified afterwards.
  void inverse_destructive(std::span<cplx> in, std::span<double> out) const;

  // Copies `in` into a temporary before transforming.
  void inverse(std::span<const cplx> in, std::span<double> out) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// In-place complex transform of length n (a power of two keeps FFTW on its fast path).
///
/// `forward` computes F_k = (1/n) sum_m f_m e^{-2 pi i k m / n}; `inverse` the unnormalized
/// f_m = sum_k F_k e^{2 pi i k m / n}. Buffers must come from FftAllocator.
class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n);
  std::size_t size() const noexcept { return n_; }
  void forward(std::span<cplx> data) const;
  void inverse(std::span<cplx> data) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace besovch
