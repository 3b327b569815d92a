#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "besovch/grid.hpp"
#include "besovch/littlewood_paley.hpp"

namespace besovch {

/// Selects ||.||_{B^s_{p,r}} or, with `log_weight`, the logarithmic norm
/// sup_j max(j, 1) 2^{js} ||Delta_j f||_{L^p}.
struct BesovSpec {
  double s = 0.0;
  LpExponent p = LpExponent::infinity;
  LpExponent r = LpExponent::one;
  bool log_weight = false;

  static BesovSpec b0_inf_1() { return {0.0, LpExponent::infinity, LpExponent::one, false}; }
  static BesovSpec b1_inf_1() { return {1.0, LpExponent::infinity, LpExponent::one, false}; }
  static BesovSpec log_inf(double s) { return {s, LpExponent::infinity, LpExponent::infinity, true}; }

  /// Throws InvalidArgument when the combination is outside the implemented set.
  void validate() const;
  std::string to_string() const;
};

LpExponent parse_lp_exponent(const std::string& text);

struct NormReport {
  double value = 0.0;
  std::vector<std::pair<int, double>> per_block;  // (j, weighted block contribution)

  /// Recomputes the norm from `per_block` under the given summability.
  static double combine(const std::vector<std::pair<int, double>>& per_block, LpExponent r);
};

/// Turns raw block norms (entry 0 is j = -1) into a report for `spec`.
NormReport report_from_blocks(std::span<const double> block_norms, const BesovSpec& spec);

NormReport besov_norm(const Field& f, const BesovSpec& spec, const FilterBank& bank, BlockSampling sampling = {});

/// Norm of m(D) f evaluated straight from a spectrum (m may be null).
NormReport besov_norm(std::span<const cplx> spectrum, const BesovSpec& spec, BlockNormEvaluator& evaluator,
                      const Multiplier* m = nullptr);

/// ||f||_inf + ||f_x||_inf with the spectral derivative.
double lipschitz_norm(const Field& f);

/// Integral of f^2 + f_x^2 over the grid period, evaluated by Parseval.
double h1_energy(const Field& f) noexcept;
double h1_energy(const GridSpec& grid, std::span<const cplx> spectrum) noexcept;

}  // namespace besovch
