#include "besovch/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

#include "besovch/error.hpp"

namespace besovch {
namespace detail {

void* fft_aligned_alloc(std::size_t bytes) {
  void* p = fftw_malloc(std::max<std::size_t>(bytes, 1));
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

void fft_aligned_free(void* p) noexcept { fftw_free(p); }

}  // namespace detail

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW's planner is not re-entrant. Plans live for the whole process.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

PlanPair plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(planner_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  // FFTW_ESTIMATE picks the same algorithm on every run, which keeps outputs bit-reproducible.
  auto* re = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  auto* sp = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
  const int len = static_cast<int>(n);
  PlanPair p{fftw_plan_dft_r2c_1d(len, re, sp, FFTW_ESTIMATE),
             fftw_plan_dft_c2r_1d(len, sp, re, FFTW_ESTIMATE | FFTW_DESTROY_INPUT)};
  fftw_free(re);
  fftw_free(sp);
  if (p.forward == nullptr || p.inverse == nullptr) {
    throw NumericalError("FFTW failed to create a plan of length " + std::to_string(n));
  }
  cache.emplace(n, p);
  return p;
}

PlanPair complex_plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(planner_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  const int len = static_cast<int>(n);
  PlanPair p{fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE),
             fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE)};
  fftw_free(buf);
  if (p.forward == nullptr || p.inverse == nullptr) {
    throw NumericalError("FFTW failed to create a complex plan of length " + std::to_string(n));
  }
  cache.emplace(n, p);
  return p;
}

bool aligned(const void* p) { return fftw_alignment_of(static_cast<double*>(const_cast<void*>(p))) == 0; }

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("RealFft length must be even and >= 2");
  if (n > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
    throw InvalidArgument("RealFft length exceeds the backend limit");
  }
  const PlanPair p = plans_for(n);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void RealFft::forward(std::span<const double> in, std::span<cplx> out) const {
  if (in.size() != n_ || out.size() != spectrum_size()) {
    throw InvalidArgument("RealFft::forward: buffer sizes do not match the transform length");
  }
  auto* plan = static_cast<fftw_plan>(forward_plan_);
  if (aligned(in.data()) && aligned(out.data())) {
    fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
  } else {
    RealVector tin(in.begin(), in.end());
    ComplexVector tout(out.size());
    fftw_execute_dft_r2c(plan, tin.data(), reinterpret_cast<fftw_complex*>(tout.data()));
    std::copy(tout.begin(), tout.end(), out.begin());
  }
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& c : out) c *= scale;
}

void RealFft::inverse_destructive(std::span<cplx> in, std::span<double> out) const {
  if (out.size() != n_ || in.size() != spectrum_size()) {
    throw InvalidArgument("RealFft::inverse: buffer sizes do not match the transform length");
  }
  auto* plan = static_cast<fftw_plan>(inverse_plan_);
  if (aligned(in.data()) && aligned(out.data())) {
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  } else {
    ComplexVector tin(in.begin(), in.end());
    RealVector tout(n_);
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(tin.data()), tout.data());
    std::copy(tout.begin(), tout.end(), out.begin());
  }
}

void RealFft::inverse(std::span<const cplx> in, std::span<double> out) const {
  ComplexVector scratch(in.begin(), in.end());
  inverse_destructive(scratch, out);
}

ComplexFft::ComplexFft(std::size_t n) : n_(n) {
  if (n < 1 || n > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
    throw InvalidArgument("ComplexFft length out of range");
  }
  const PlanPair p = complex_plans_for(n);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

namespace {
void run_inplace(void* plan, std::span<cplx> data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  if (aligned(data.data())) {
    fftw_execute_dft(static_cast<fftw_plan>(plan), buf, buf);
  } else {
    ComplexVector tmp(data.begin(), data.end());
    auto* t = reinterpret_cast<fftw_complex*>(tmp.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan), t, t);
    std::copy(tmp.begin(), tmp.end(), data.begin());
  }
}
}  // namespace

void ComplexFft::forward(std::span<cplx> data) const {
  if (data.size() != n_) throw InvalidArgument("ComplexFft::forward: buffer size mismatch");
  run_inplace(forward_plan_, data);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& c : data) c *= scale;
}

void ComplexFft::inverse(std::span<cplx> data) const {
  if (data.size() != n_) throw InvalidArgument("ComplexFft::inverse: buffer size mismatch");
  run_inplace(inverse_plan_, data);
}

}  // namespace besovch
