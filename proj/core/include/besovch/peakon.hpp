#pragma once

#include <cstddef>
#include <vector>

#include "besovch/grid.hpp"

namespace besovch {

/// Multipeakon u(t, x) = sum_i p_i e^{-|x - q_i|}.
struct PeakonState {
  std::vector<double> p;
  std::vector<double> q;
  double t = 0.0;

  std::size_t size() const noexcept { return p.size(); }
  double momentum() const noexcept;
  /// Throws InvalidArgument on empty, mismatched or non-finite vectors.
  void validate() const;
};

struct PeakonDerivative {
  std::vector<double> dp;
  std::vector<double> dq;
};

/// dp_i = sum_{j != i} p_i p_j sign(q_i - q_j) e^{-|q_i - q_j|}, dq_i = sum_j p_j e^{-|q_i - q_j|},
/// with sign(0) = 0. Each pair is visited once, so sum_i dp_i cancels exactly in floating point.
PeakonDerivative multipeakon_rhs(const PeakonState& s);

PeakonState step_peakons_rk4(const PeakonState& s, double dt);

/// Fixed-step RK4 to t_end (last step shortened to land on it). Returns the initial state, every
/// `record_every`-th step (0: none) and the final state.
std::vector<PeakonState> integrate_peakons(const PeakonState& s0, double t_end, double dt,
                                           std::size_t record_every = 0);

/// e^{-|x|} convolved with a unit-mass Gaussian of standard deviation sigma (closed form).
double mollified_peakon_profile(double x, double sigma) noexcept;

/// Samples the multipeakon on a periodic grid, summing the nearest periodic images. With
/// `mollify_width` w > 0 each peakon is convolved with a Gaussian of standard deviation w / 2.
/// Throws InvalidArgument for a position outside [-L, L).
Field peakon_field(const PeakonState& s, const GridSpec& grid, double mollify_width = 0.0);

}  // namespace besovch
