#include "cvent/detection.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

namespace cvent {

DetectionRecord detect_arm(const GaussianState& state, std::size_t arm_mode, double theta) {
  if (arm_mode >= state.mode_count()) throw std::out_of_range("detect_arm: arm index out of range");
  DetectionRecord r;
  r.theta = theta;
  r.arm = state.labels.at(arm_mode);
  r.mean_intensity = state.means[arm_mode].photon_number();
  r.shot_noise = r.mean_intensity;
  const double v_amp = quadrature_variance(state, arm_mode, Quadrature::X, Frame::mean_field);
  r.amplitude_noise = r.mean_intensity * v_amp;
  r.dark = r.mean_intensity < kDarkFringeFraction * state.total_intensity() || r.mean_intensity == 0.0;
  if (!r.dark) r.normalized_variance = v_amp;
  return r;
}

GaussianState interfere_for_detection(const GaussianState& state, std::size_t mode1,
                                      std::size_t mode2, double theta) {
  const GaussianState shifted = apply_phase_shift(state, mode2, theta);
  const double align = state.means.at(mode1).phase() - state.means.at(mode2).phase();
  return apply_beam_splitter(shifted, mode1, mode2, 0.5, align);
}

double normalized_variance_formula(double v_plus, double v_minus, double theta, Sign sign) {
  const double denom = sign == Sign::plus ? 1.0 + std::cos(theta) : 1.0 - std::cos(theta);
  if (std::abs(denom) < 1e-15) {
    throw std::domain_error("normalized_variance_formula: dark fringe (1 +/- cos theta = 0)");
  }
  const double s = std::sin(theta);
  return 0.5 * (denom * v_plus + s * s / denom * v_minus);
}

std::vector<DetectionRecord> scan_theta(const NetworkFamily& family, std::span<const double> grid,
                                        std::size_t arm_mode) {
  if (grid.empty()) throw std::invalid_argument("scan_theta: empty grid");
  for (double t : grid) {
    if (!std::isfinite(t)) throw std::invalid_argument("scan_theta: non-finite grid value");
  }
  std::vector<DetectionRecord> out(grid.size());
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
  const std::size_t chunk = (grid.size() + workers - 1) / workers;
  std::vector<std::future<void>> jobs;
  for (std::size_t begin = 0; begin < grid.size(); begin += chunk) {
    const std::size_t end = std::min(grid.size(), begin + chunk);
    jobs.push_back(std::async(std::launch::async, [&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) {
        out[i] = detect_arm(propagate(family(grid[i])), arm_mode, grid[i]);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

std::vector<double> linear_grid(double from, double to, std::size_t points) {
  if (points == 0) throw std::invalid_argument("linear_grid: points must be > 0");
  if (!std::isfinite(from) || !std::isfinite(to)) {
    throw std::invalid_argument("linear_grid: bounds must be finite");
  }
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = from;
    return g;
  }
  const double step = (to - from) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = from + step * static_cast<double>(i);
  g.back() = to;
  return g;
}

}  // namespace cvent
