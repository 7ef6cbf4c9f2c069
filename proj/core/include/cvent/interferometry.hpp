/**
 * @file interferometry.hpp
 * @brief Two-interference pipeline: squeezed sources, first beam splitter at
 * phase phi, phase shift theta in one arm, second beam splitter, detection.
 *
 * Mode 0 carries input a -> arm 1 -> output c; mode 1 carries b -> 2 -> d.
 * With the default second_phase = pi/2 and phi = pi/2 the outputs follow
 * n_c,d = alpha^2 (1 +/- cos theta).
 */

#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "cvent/detection.hpp"
#include "cvent/network.hpp"

namespace cvent {

struct PipelineConfig {
  double squeeze_db_a = 4.0;
  double squeeze_db_b = 4.0;
  double excess_a = 1.0;
  double excess_b = 1.0;
  /// Real mean amplitude of each input beam (sqrt of photons per beam).
  double amplitude = 1e3;
  double phi = std::numbers::pi / 2;
  double theta = std::numbers::pi / 2;
  double second_phase = std::numbers::pi / 2;

  void validate() const;
};

/// Amplitude / phase modulation imposed on arm 1 before recombination.
/// Variances are in shot-noise units of the combined two-arm detection mode.
struct ModulationSignal {
  double v_x_mod = 0.0;
  double v_y_mod = 0.0;
};

struct PipelineResult {
  GaussianState entangled;  ///< after the first beam splitter, modes "1", "2"
  GaussianState output;     ///< after the second beam splitter, modes "c", "d"
  DetectionRecord arm_c;
  DetectionRecord arm_d;
};

/// Number of steps before the phase shift (the entangled arms exist after it).
inline constexpr std::size_t kEntanglingSteps = 1;

Network pipeline_network(const PipelineConfig& config,
                         const std::optional<ModulationSignal>& modulation = std::nullopt);

/// Pipeline networks indexed by theta.
NetworkFamily theta_family(const PipelineConfig& config);

PipelineResult run_pipeline(const PipelineConfig& config);

struct PipelineScan {
  std::vector<DetectionRecord> arm_c;
  std::vector<DetectionRecord> arm_d;
};

PipelineScan scan_pipeline(const PipelineConfig& config, std::span<const double> theta_grid);

/// <n> / sqrt(V(n)). Throws std::domain_error for a dark arm.
double snr(const DetectionRecord& record);

struct SensitivityReport {
  double theta_operating = 0.0;
  double n = 0.0;  ///< mean photon number detected in the arm
  double normalized_variance = 0.0;
  double snr = 0.0;
  /// SNR = 1 point: |n(theta + d) - n(theta)| = sqrt(V(n(theta))), by bisection.
  double delta_theta_min = 0.0;
  /// Small-signal estimate noise / |dn/dtheta| with a central difference.
  double delta_theta_linear = 0.0;
  /// sqrt(V/n), the full-visibility quadrature-point limit.
  double closed_form_full_contrast = 0.0;
  /// sqrt(2V/n), the same limit at fringe visibility 1/sqrt(2).
  double closed_form_reduced_contrast = 0.0;
  double sql = 0.0;  ///< sqrt(1/n)
  double improvement_factor = 0.0;  ///< sql / delta_theta_min
  /// delta_theta_min of the same geometry with coherent inputs (pipeline
  /// overload only; NaN otherwise) and the ratio coherent / entangled.
  double coherent_delta_theta = 0.0;
  double gain_over_coherent = 0.0;
};

SensitivityReport min_resolvable_phase(const NetworkFamily& family, double theta_operating,
                                       std::size_t arm_mode);

/// Pipeline overload: detection in arm c (mode 0) unless `arm_mode` = 1.
SensitivityReport min_resolvable_phase(const PipelineConfig& config, double theta_operating,
                                       std::size_t arm_mode = 0);

struct DenseCodingReport {
  double theta = 0.0;
  double alpha_sq = 0.0;  ///< mean photons per entangled arm, (n_c + n_d)/2
  double v_plus = 0.0;    ///< sum channel, in units where shot noise = alpha_sq
  double v_minus = 0.0;   ///< difference channel
  double v_sq = 0.0;      ///< V_sq+(dX) of the entangled arms
  double v_sq_minus = 0.0;  ///< V_sq-(dY) of the entangled arms
  double v_plus_closed = 0.0;   ///< alpha^2 (V_sq + V(dX_m))
  double v_minus_closed = 0.0;  ///< alpha^2 (V_sq + V(dY_m))
  double coherent_bound_plus = 0.0;
  double coherent_bound_minus = 0.0;
  double snr_gain_x = 0.0;  ///< (1 + v_x_mod) / (v_sq + v_x_mod)
  double snr_gain_y = 0.0;
};

/// With `strict`, throws PhysicsError if V_sq+ and V_sq- differ by > 1e-6.
DenseCodingReport dense_coding_readout(const PipelineConfig& config, const ModulationSignal& modulation,
                                       double theta, bool strict = false);

/// `network` with the modulation of `arm1` inserted after `entangled_steps`.
Network dense_coding_network(const Network& network, std::size_t entangled_steps, std::size_t arm1,
                             const ModulationSignal& modulation);

/// Sum / difference photocurrent channels of two output modes with an
/// arbitrary network (used by the scenario runner).
DenseCodingReport dense_coding_readout(const Network& network, std::size_t entangled_steps,
                                       std::size_t arm1, std::size_t arm2,
                                       const ModulationSignal& modulation, double theta, bool strict);

/// Coefficient vector of the linearized photocurrent w1 dn1 + w2 dn2.
Eigen::VectorXd photocurrent_combination(const GaussianState& state, std::size_t mode1, double w1,
                                         std::size_t mode2, double w2);

}  // namespace cvent
