#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "besovch/fft.hpp"
#include "besovch/grid.hpp"
#include "besovch/littlewood_paley.hpp"

namespace besovch {

/// Largest N the static pipeline accepts (grid 2^{N+9} <= 2^27 points).
inline constexpr int kMaxStaticN = 18;

struct CounterexampleParams {
  int N = 10;
  GridSpec grid;
  /// Left jump of the periodic Heaviside surrogate h = 1 on [a, a + L/2).
  double jump_location = 0.0;

  /// L = pi and n = 2^{N+9}: Nyquist 2^{N+8}, carrier 2^{N+5} on the lattice.
  static CounterexampleParams standard(int N);

  double epsilon() const noexcept;      // N^{-1/10}
  double carrier() const noexcept;      // 2^{N+5}
  std::size_t carrier_index() const;    // lattice index of the carrier
  /// Throws InvalidArgument (off-lattice carrier, bad N) or CapacityError (grid too small).
  void validate() const;
};

/// Exact Fourier coefficients of the periodic Heaviside surrogate in the grid's half-complex
/// convention (not band-limited; aliasing is ignored by construction).
ComplexVector heaviside_spectrum(const GridSpec& grid, double jump_location = 0.0);

/// S_N h with S_N = chi(2^{-N} D). Throws CapacityError when the grid cannot hold the band.
Field heaviside_partial_sum(int N, const GridSpec& grid, const FilterBank& bank, double jump_location = 0.0);

/// Spectrum of u0 = -(1 - d_xx)^{-1} d_x [cos(2^{N+5} x)(1 + eps S_N h)] eps, eps = N^{-1/10}.
/// The carrier product is formed exactly by modulating the spectrum of 1 + eps S_N h.
ComplexVector u0_spectrum(const CounterexampleParams& params);

Field build_u0(const CounterexampleParams& params);

/// E0 = -(1 - d_xx)^{-1} d_x (u0_x^2 / 2), square formed with 2/3 dealiasing.
Field build_E0(const Field& u0);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

/// Least-squares fit of log2(values) against log2(ns).
SlopeFit fit_log2_slope(std::span<const double> ns, std::span<const double> values);

struct ScalingRecord {
  int N = 0;
  std::size_t n_points = 0;
  double u0_b1_inf_1 = 0.0;      // ||u0||_{B^1_{inf,1}}
  double u0_log_b1 = 0.0;        // ||u0||_{B^1_{inf,inf,1}}
  double u0x_b0 = 0.0;           // ||u0_x||_{B^0_{inf,1}}
  double u0x2_b0 = 0.0;          // ||u0_x^2||_{B^0_{inf,1}}
  double algebra_ratio = 0.0;    // ||u0_x^2|| / ||u0_x||^2
  double e0_b1_inf_1 = 0.0;      // ||E0||_{B^1_{inf,1}}
  int active_j_min = 0;          // blocks of u0 within 1e-3 of its largest contribution
  int active_j_max = 0;
};

struct ScalingReport {
  std::vector<ScalingRecord> records;
  SlopeFit u0_b1_inf_1;
  SlopeFit u0_log_b1;
  SlopeFit u0x_b0;
  SlopeFit u0x2_b0;
  SlopeFit algebra_ratio;
  SlopeFit e0_b1_inf_1;
};

struct ScalingOptions {
  BlockSampling sampling;
  double jump_location = 0.0;
};

/// All static norms for one N, working on raw spectra so that N = 18 fits in a few GB.
ScalingRecord scaling_record(int N, const ScalingOptions& options = {});

/// Records sorted by N plus fitted slopes. Runs sequentially: each N at the top of the ladder
/// needs most of a desk machine's memory on its own.
ScalingReport algebra_failure_experiment(std::vector<int> n_list, const ScalingOptions& options = {});

struct HeavisideCalibration {
  int N = 0;
  double snh_b0 = 0.0;             // ||S_N h||_{B^0_{inf,1}}
  double per_n = 0.0;              // snh_b0 / N
  std::vector<double> h_blocks;    // ||Delta_j h||_inf for j = -1..N-1 (entry 0 is j = -1)
};

/// ||S_N h||_{B^0_{inf,1}} on a grid of 2^{N+4} points (L = pi).
HeavisideCalibration heaviside_calibration(int N, const BlockSampling& sampling = {});

}  // namespace besovch
