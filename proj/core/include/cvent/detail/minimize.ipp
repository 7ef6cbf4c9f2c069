#pragma once

#include <algorithm>
#include <cmath>

namespace cvent {

template <typename F>
GainOptimum minimize_gain(F&& f, double lo, double hi, double tolerance) {
  constexpr int kGrid = 400;
  const double step = (hi - lo) / kGrid;
  GainOptimum best{lo, f(lo)};
  for (int i = 1; i <= kGrid; ++i) {
    const double g = lo + step * i;
    const double v = f(g);
    // Strict improvement beyond rounding keeps ties at the smallest gain.
    if (v < best.variance - 1e-14 * std::max(1.0, std::abs(best.variance))) best = {g, v};
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(lo, best.gain - step);
  double b = std::min(hi, best.gain + step);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double g = 0.5 * (a + b);
  const double v = f(g);
  if (v < best.variance - 1e-14 * std::max(1.0, std::abs(best.variance))) best = {g, v};
  return best;
}

}  // namespace cvent
