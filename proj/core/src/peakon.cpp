#include "besovch/peakon.hpp"

#include <cmath>
#include <numbers>

#include "besovch/error.hpp"

namespace besovch {

double PeakonState::momentum() const noexcept {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

void PeakonState::validate() const {
  if (p.empty()) throw InvalidArgument("peakon state needs at least one peakon");
  if (p.size() != q.size()) throw InvalidArgument("peakon amplitudes and positions differ in length");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || !std::isfinite(q[i])) throw InvalidArgument("peakon state must be finite");
  }
  if (!std::isfinite(t)) throw InvalidArgument("peakon time must be finite");
}

PeakonDerivative multipeakon_rhs(const PeakonState& s) {
  const std::size_t n = s.size();
  PeakonDerivative d{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) d.dq[i] += s.p[i];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double diff = s.q[i] - s.q[j];
      const double e = std::exp(-std::abs(diff));
      const double sgn = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
      const double flux = s.p[i] * s.p[j] * sgn * e;
      d.dp[i] += flux;
      d.dp[j] -= flux;
      d.dq[i] += s.p[j] * e;
      d.dq[j] += s.p[i] * e;
    }
  }
  return d;
}

namespace {
PeakonState axpy(const PeakonState& s, const PeakonDerivative& d, double h) {
  PeakonState out = s;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.p[i] += h * d.dp[i];
    out.q[i] += h * d.dq[i];
  }
  out.t += h;
  return out;
}
}  // namespace

PeakonState step_peakons_rk4(const PeakonState& s, double dt) {
  const PeakonDerivative k1 = multipeakon_rhs(s);
  const PeakonDerivative k2 = multipeakon_rhs(axpy(s, k1, 0.5 * dt));
  const PeakonDerivative k3 = multipeakon_rhs(axpy(s, k2, 0.5 * dt));
  const PeakonDerivative k4 = multipeakon_rhs(axpy(s, k3, dt));
  PeakonState out = s;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.p[i] += dt / 6.0 * (k1.dp[i] + 2.0 * k2.dp[i] + 2.0 * k3.dp[i] + k4.dp[i]);
    out.q[i] += dt / 6.0 * (k1.dq[i] + 2.0 * k2.dq[i] + 2.0 * k3.dq[i] + k4.dq[i]);
  }
  out.t = s.t + dt;
  return out;
}

std::vector<PeakonState> integrate_peakons(const PeakonState& s0, double t_end, double dt, std::size_t record_every) {
  s0.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("peakon time step must be positive");
  if (!(t_end >= s0.t) || !std::isfinite(t_end)) throw InvalidArgument("peakon t_end must not precede the start");
  std::vector<PeakonState> out{s0};
  PeakonState s = s0;
  const auto steps = static_cast<std::size_t>(std::ceil((t_end - s0.t) / dt - 1e-9));
  for (std::size_t k = 1; k <= steps; ++k) {
    // Times come from the step index so long runs do not accumulate rounding in t.
    const double target = k == steps ? t_end : s0.t + static_cast<double>(k) * dt;
    s = step_peakons_rk4(s, target - s.t);
    s.t = target;
    if (k == steps || (record_every > 0 && k % record_every == 0)) out.push_back(s);
  }
  return out;
}

double mollified_peakon_profile(double x, double sigma) noexcept {
  const double a = std::abs(x);
  if (sigma <= 0.0) return std::exp(-a);
  const double s2 = sigma * sigma;
  const double root2s = sigma * std::numbers::sqrt2;
  const double far = (s2 + a) / root2s;
  const double near = std::exp(-a) * std::erfc((s2 - a) / root2s);
  const double mirror = far > 26.0 ? 0.0 : std::exp(a) * std::erfc(far);
  return 0.5 * std::exp(0.5 * s2) * (near + mirror);
}

Field peakon_field(const PeakonState& s, const GridSpec& grid, double mollify_width) {
  s.validate();
  if (mollify_width < 0.0 || !std::isfinite(mollify_width)) {
    throw InvalidArgument("mollification width must be finite and >= 0");
  }
  const double L = grid.half_length;
  for (double q : s.q) {
    if (q < -L || q >= L) throw InvalidArgument("peakon position outside the periodic domain");
  }
  const double sigma = 0.5 * mollify_width;
  RealVector out(grid.n_points, 0.0);
  for (std::size_t m = 0; m < grid.n_points; ++m) {
    const double x = grid.x(m);
    double v = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double d = x - s.q[i];
      for (int img = -1; img <= 1; ++img) v += s.p[i] * mollified_peakon_profile(d + 2.0 * L * img, sigma);
    }
    out[m] = v;
  }
  return Field::from_samples(grid, std::move(out));
}

}  // namespace besovch
