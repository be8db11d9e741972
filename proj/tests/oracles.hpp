#pragma once

// Test-only reference evaluations. These deliberately avoid the library's code
// paths (no std::complex, no shared helpers) so they can serve as oracles.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace oracle {

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;
inline constexpr long double kC = 299792458.0L;

/// Friis free-space loss in dB, 20 log10(4 pi d f / c), evaluated in long double.
inline long double friis_db(long double f_hz, long double d_m) {
  return 20.0L * std::log10(4.0L * kPi * d_m * f_hz / kC);
}

/// Principal square root of (a - j b), b >= 0, via the half-angle closed form.
/// Returns (re, im) with re >= 0 and im <= 0.
inline void sqrt_lossy(long double a, long double b, long double& re, long double& im) {
  const long double mag = std::sqrt(a * a + b * b);
  re = std::sqrt((mag + a) / 2.0L);
  im = -std::sqrt((mag - a) / 2.0L);
}

/// Power penetration depth of a plane wave in a medium with permittivity a - j b.
inline long double penetration_depth(long double a, long double b, long double f_hz) {
  long double re, im;
  sqrt_lossy(a, b, re, im);
  const long double alpha = 2.0L * kPi * f_hz / kC * std::fabs(im);
  return 1.0L / (2.0L * alpha);
}

/// 1 - |(1 - n)/(1 + n)|^2 with n = re + j im, expanded into real arithmetic:
/// |1 - n|^2 = (1 - re)^2 + im^2, |1 + n|^2 = (1 + re)^2 + im^2.
inline long double transmittance(long double a, long double b) {
  long double re, im;
  sqrt_lossy(a, b, re, im);
  const long double num = (1.0L - re) * (1.0L - re) + im * im;
  const long double den = (1.0L + re) * (1.0L + re) + im * im;
  return 1.0L - num / den;
}

inline double rel_err(double got, double want) {
  if (want == 0.0) return std::fabs(got);
  return std::fabs(got - want) / std::fabs(want);
}

/// Exhaustive argmin with lower-index tie-break.
template <typename Fn>
std::size_t brute_argmin(const std::vector<std::size_t>& ids, Fn&& value) {
  std::size_t best = ids.front();
  double best_v = value(best);
  for (std::size_t id : ids) {
    const double v = value(id);
    if (v < best_v || (v == best_v && id < best)) {
      best = id;
      best_v = v;
    }
  }
  return best;
}

}  // namespace oracle

#include <algorithm>

namespace oracle {

/// Midpoint Riemann sum of fn over [0, 2pi) on a uniform partition of `steps`
/// cells, refined with `breakpoints` (e.g. the discontinuities of a sectored pattern).
template <typename Fn>
double riemann_circle(Fn&& fn, std::vector<double> breakpoints, std::size_t steps) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  std::vector<double> cuts;
  cuts.reserve(steps + breakpoints.size() + 1);
  for (std::size_t k = 0; k <= steps; ++k) cuts.push_back(two_pi * static_cast<double>(k) / static_cast<double>(steps));
  for (double b : breakpoints) {
    double w = std::fmod(b, two_pi);
    if (w < 0) w += two_pi;
    cuts.push_back(w);
  }
  std::sort(cuts.begin(), cuts.end());
  long double sum = 0.0L;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double width = cuts[i + 1] - cuts[i];
    if (width <= 0.0) continue;
    sum += static_cast<long double>(fn(0.5 * (cuts[i] + cuts[i + 1]))) * width;
  }
  return static_cast<double>(sum);
}

}  // namespace oracle
