#include "besovch/besov.hpp"

#include <algorithm>
#include <cmath>

#include "besovch/error.hpp"

namespace besovch {

void BesovSpec::validate() const {
  if (!std::isfinite(s)) throw InvalidArgument("Besov regularity s must be finite");
  if (log_weight && r != LpExponent::infinity) {
    throw InvalidArgument("the logarithmic Besov norm is a supremum; use r = inf with log_weight");
  }
}

namespace {
const char* lp_name(LpExponent p) {
  switch (p) {
    case LpExponent::one: return "1";
    case LpExponent::two: return "2";
    case LpExponent::infinity: return "inf";
  }
  return "?";
}
}  // namespace

std::string BesovSpec::to_string() const {
  std::string out = "B^" + std::to_string(s) + "_{" + lp_name(p) + "," + lp_name(r);
  if (log_weight) out += ",1";
  return out + "}";
}

LpExponent parse_lp_exponent(const std::string& text) {
  if (text == "1") return LpExponent::one;
  if (text == "2") return LpExponent::two;
  if (text == "inf" || text == "infinity" || text == "oo") return LpExponent::infinity;
  throw InvalidArgument("unsupported exponent '" + text + "' (expected 1, 2 or inf)");
}

double NormReport::combine(const std::vector<std::pair<int, double>>& per_block, LpExponent r) {
  double acc = 0.0;
  for (const auto& [j, c] : per_block) {
    switch (r) {
      case LpExponent::one: acc += c; break;
      case LpExponent::two: acc += c * c; break;
      case LpExponent::infinity: acc = std::max(acc, c); break;
    }
  }
  return r == LpExponent::two ? std::sqrt(acc) : acc;
}

NormReport report_from_blocks(std::span<const double> block_norms, const BesovSpec& spec) {
  spec.validate();
  NormReport rep;
  rep.per_block.reserve(block_norms.size());
  for (std::size_t i = 0; i < block_norms.size(); ++i) {
    const int j = static_cast<int>(i) - 1;
    double c = std::exp2(spec.s * j) * block_norms[i];
    if (spec.log_weight) c *= std::max(j, 1);
    rep.per_block.emplace_back(j, c);
  }
  rep.value = NormReport::combine(rep.per_block, spec.r);
  return rep;
}

NormReport besov_norm(const Field& f, const BesovSpec& spec, const FilterBank& bank, BlockSampling sampling) {
  if (!(f.grid() == bank.grid())) throw InvalidArgument("field and filter bank grids differ");
  BlockNormEvaluator ev(bank, sampling);
  return besov_norm(f.spectrum(), spec, ev, nullptr);
}

NormReport besov_norm(std::span<const cplx> spectrum, const BesovSpec& spec, BlockNormEvaluator& evaluator,
                      const Multiplier* m) {
  spec.validate();
  const auto blocks = evaluator.norms(spectrum, spec.p, m);
  return report_from_blocks(blocks, spec);
}

double lipschitz_norm(const Field& f) { return f.sup_norm() + derivative(f).sup_norm(); }

double h1_energy(const GridSpec& grid, std::span<const cplx> spectrum) noexcept {
  const std::size_t half = grid.n_points / 2;
  double s = 0.0;
  for (std::size_t k = 0; k <= half; ++k) {
    const double xi = grid.wavenumber(k);
    // The Nyquist mode loses its derivative (spectral d/dx zeroes it).
    const double weight = (k == half) ? 1.0 : 1.0 + xi * xi;
    const double mult = (k == 0 || k == half) ? 1.0 : 2.0;
    s += mult * weight * std::norm(spectrum[k]);
  }
  return grid.length() * s;
}

double h1_energy(const Field& f) noexcept { return h1_energy(f.grid(), f.spectrum()); }

}  // namespace besovch
