#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "cvent/gaussian.hpp"
#include "cvent/interferometry.hpp"
#include "cvent/network.hpp"

namespace fixtures {

using cvent::Complex;
using cvent::GaussianState;
using cvent::Network;

inline constexpr double kPi = std::numbers::pi;

inline double db_to_variance(double db) { return std::pow(10.0, -db / 10.0); }
inline double variance_to_db(double v) { return -10.0 * std::log10(v); }

// 4 dB amplitude and conjugate variances.
inline const double kVs = db_to_variance(4.0);
inline const double kVa = 1.0 / kVs;

inline GaussianState squeezed_pair(double db_a, double db_b, double amp_a = 1e3, double amp_b = 1e3) {
  return cvent::combine({cvent::new_squeezed_bright(amp_a, db_a, 1.0, "a"),
                         cvent::new_squeezed_bright(amp_b, db_b, 1.0, "b")});
}

// Two bright squeezed beams interfered with phase phi on a 50/50 splitter.
inline GaussianState epr_pair(double db_a, double db_b, double phi = kPi / 2, double amp = 1e3) {
  return cvent::apply_beam_splitter(squeezed_pair(db_a, db_b, amp, amp), 0, 1, 0.5, phi);
}

// Modes of equal real mean alpha with V_sq+(dX) = v_plus, V_sq-(dY) = v_minus
// and no X-Y cross terms: a bright beam sqrt(2) alpha squeezed to v_plus and a
// squeezed vacuum with V(dX) = v_minus, combined at phase pi/2.
inline GaussianState asymmetric_epr(double v_plus, double v_minus, double alpha = 1e3) {
  const GaussianState in =
      cvent::combine({cvent::new_squeezed_bright(alpha * std::sqrt(2.0), variance_to_db(v_plus), 1.0, "a"),
                      cvent::new_squeezed_bright(0.0, variance_to_db(v_minus), 1.0, "b")});
  return cvent::apply_beam_splitter(in, 0, 1, 0.5, kPi / 2);
}

// Brute-force minimum of f on [lo, hi] with a fixed step.
struct GridMin {
  double x = 0.0;
  double f = 0.0;
};

inline GridMin grid_min(const std::function<double(double)>& f, double lo, double hi, double step) {
  GridMin best{lo, f(lo)};
  const auto n = static_cast<long>(std::floor((hi - lo) / step));
  for (long i = 1; i <= n; ++i) {
    const double x = lo + step * static_cast<double>(i);
    const double v = f(x);
    if (v < best.f) best = {x, v};
  }
  return best;
}

// Random physical input (product of squeezed, rotated bright modes) followed
// by a random sequence of phase shifts and beam splitters.
struct RandomNetworkSpec {
  std::size_t max_modes = 4;
  std::size_t max_elements = 6;
  double max_db = 10.0;
  double max_amplitude = 30.0;
};

inline Network random_network(std::mt19937_64& rng, const RandomNetworkSpec& spec = {}) {
  std::uniform_int_distribution<std::size_t> modes_d(1, spec.max_modes);
  std::uniform_int_distribution<std::size_t> elems_d(1, spec.max_elements);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = modes_d(rng);
  std::vector<GaussianState> parts;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex amp = std::polar(spec.max_amplitude * u(rng), 2.0 * kPi * u(rng));
    parts.push_back(cvent::new_squeezed_rotated(amp, spec.max_db * u(rng), 1.0 + 2.0 * u(rng),
                                                2.0 * kPi * u(rng), "m" + std::to_string(j)));
  }
  Network net;
  net.input = cvent::combine(parts);
  const std::size_t m = elems_d(rng);
  std::uniform_int_distribution<std::size_t> mode_d(0, n - 1);
  for (std::size_t k = 0; k < m; ++k) {
    if (n < 2 || u(rng) < 0.4) {
      net.steps.push_back(cvent::PhaseShift{mode_d(rng), 2.0 * kPi * u(rng) - kPi});
    } else {
      const std::size_t i = mode_d(rng);
      std::size_t j = mode_d(rng);
      while (j == i) j = mode_d(rng);
      net.steps.push_back(cvent::BeamSplitter{i, j, u(rng), 2.0 * kPi * u(rng)});
    }
  }
  return net;
}

// Two polarized beams A = (0, 2), B = (1, 3): x inputs on modes 0, 1 and y
// inputs on modes 2, 3, each pair interfered at phase pi/2.
inline GaussianState polarization_pair(double db_x, double db_y, double amp = 1e3) {
  GaussianState s = cvent::combine({cvent::new_squeezed_bright(amp, db_x, 1.0, "xa"),
                                    cvent::new_squeezed_bright(amp, db_x, 1.0, "xb"),
                                    cvent::new_squeezed_bright(amp, db_y, 1.0, "ya"),
                                    cvent::new_squeezed_bright(amp, db_y, 1.0, "yb")});
  s = cvent::apply_beam_splitter(s, 0, 1, 0.5, kPi / 2);
  s = cvent::apply_beam_splitter(s, 2, 3, 0.5, kPi / 2);
  s = cvent::apply_polarizing_combiner(s, 0, 2, "A");
  return cvent::apply_polarizing_combiner(s, 1, 3, "B");
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace fixtures
