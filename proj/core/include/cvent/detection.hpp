#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvent/entanglement.hpp"
#include "cvent/network.hpp"

namespace cvent {

/// Direct (balanced) detection of one bright output arm. Intensities are in
/// photon-number units, so the difference-photocurrent shot noise equals the
/// mean intensity and the sum photocurrent gives n * V(dX_amplitude).
struct DetectionRecord {
  double theta = 0.0;
  std::string arm;
  double mean_intensity = 0.0;
  double shot_noise = 0.0;
  double amplitude_noise = 0.0;
  /// Empty on a dark fringe.
  std::optional<double> normalized_variance;
  bool dark = false;
};

/// A mode is dark when its intensity is below this fraction of the total.
inline constexpr double kDarkFringeFraction = 1e-12;

DetectionRecord detect_arm(const GaussianState& state, std::size_t arm_mode, double theta = 0.0);

/// Second interference of two (entangled) modes: phase shift theta on mode2,
/// then a 50/50 beam splitter whose phase brings the two mean fields into phase
/// at theta = 0. Output c replaces mode1 and d replaces mode2, so that
/// n_c,d = (n1 + n2)/2 (1 +/- cos theta) for equal intensities.
GaussianState interfere_for_detection(const GaussianState& state, std::size_t mode1,
                                      std::size_t mode2, double theta);

/// 1/2 [ (1 +/- cos t) V+ + sin^2 t / (1 +/- cos t) V- ].
/// Throws std::domain_error on the dark fringe (1 +/- cos t == 0).
double normalized_variance_formula(double v_plus, double v_minus, double theta, Sign sign);

/// One record per grid point, in grid order. Points run in parallel; each is
/// a pure function of theta, so the result does not depend on scheduling.
std::vector<DetectionRecord> scan_theta(const NetworkFamily& family, std::span<const double> grid,
                                        std::size_t arm_mode);

/// `points` evenly spaced values from `from` to `to` inclusive.
std::vector<double> linear_grid(double from, double to, std::size_t points);

}  // namespace cvent
