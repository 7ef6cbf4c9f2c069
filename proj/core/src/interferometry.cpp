#include "cvent/interferometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cvent/entanglement.hpp"

namespace cvent {

namespace {

constexpr double kSlopeStep = 1e-6;
constexpr double kBisectionRelTol = 1e-10;

GaussianModulation modulation_step(std::size_t mode, const ModulationSignal& m) {
  if (!(m.v_x_mod >= 0.0) || !(m.v_y_mod >= 0.0)) {
    throw std::invalid_argument("modulation variances must be >= 0");
  }
  // Referred to the combined mode (dX1 + dX2)/sqrt(2), a displacement of
  // variance w on one arm contributes w/2.
  return GaussianModulation{mode, 2.0 * m.v_x_mod, 2.0 * m.v_y_mod};
}

double intensity_at(const NetworkFamily& family, double theta, std::size_t arm_mode) {
  return propagate(family(theta)).means.at(arm_mode).photon_number();
}

}  // namespace

void PipelineConfig::validate() const {
  for (double v : {squeeze_db_a, squeeze_db_b, excess_a, excess_b, amplitude, phi, theta, second_phase}) {
    if (!std::isfinite(v)) throw std::invalid_argument("pipeline parameters must be finite");
  }
  if (!(amplitude > 0.0)) throw std::invalid_argument("pipeline amplitude must be > 0");
}

Network pipeline_network(const PipelineConfig& config, const std::optional<ModulationSignal>& modulation) {
  config.validate();
  Network net;
  net.input = combine({new_squeezed_bright(config.amplitude, config.squeeze_db_a, config.excess_a, "a"),
                       new_squeezed_bright(config.amplitude, config.squeeze_db_b, config.excess_b, "b")});
  net.steps.push_back(BeamSplitter{0, 1, 0.5, config.phi});
  if (modulation) net.steps.push_back(modulation_step(0, *modulation));
  net.steps.push_back(PhaseShift{1, config.theta});
  net.steps.push_back(BeamSplitter{0, 1, 0.5, config.second_phase});
  return net;
}

NetworkFamily theta_family(const PipelineConfig& config) {
  return [config](double theta) {
    PipelineConfig c = config;
    c.theta = theta;
    return pipeline_network(c);
  };
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  const Network net = pipeline_network(config);
  PipelineResult r;
  r.entangled = propagate_prefix(net, kEntanglingSteps);
  r.entangled.labels = {"1", "2"};
  r.output = propagate(net);
  r.output.labels = {"c", "d"};
  r.arm_c = detect_arm(r.output, 0, config.theta);
  r.arm_d = detect_arm(r.output, 1, config.theta);
  return r;
}

PipelineScan scan_pipeline(const PipelineConfig& config, std::span<const double> theta_grid) {
  const NetworkFamily family = theta_family(config);
  PipelineScan s{scan_theta(family, theta_grid, 0), scan_theta(family, theta_grid, 1)};
  for (auto& r : s.arm_c) r.arm = "c";
  for (auto& r : s.arm_d) r.arm = "d";
  return s;
}

double snr(const DetectionRecord& record) {
  if (record.dark || !(record.mean_intensity > 0.0) || !(record.amplitude_noise > 0.0)) {
    throw std::domain_error("snr: undefined for a dark arm");
  }
  return record.mean_intensity / std::sqrt(record.amplitude_noise);
}

SensitivityReport min_resolvable_phase(const NetworkFamily& family, double theta_operating,
                                       std::size_t arm_mode) {
  const GaussianState state = propagate(family(theta_operating));
  const DetectionRecord rec = detect_arm(state, arm_mode, theta_operating);
  if (rec.dark) throw std::domain_error("min_resolvable_phase: operating point is a dark fringe");

  SensitivityReport r;
  r.theta_operating = theta_operating;
  r.n = rec.mean_intensity;
  r.normalized_variance = *rec.normalized_variance;
  r.snr = snr(rec);
  const double noise = std::sqrt(rec.amplitude_noise);

  const double slope = (intensity_at(family, theta_operating + kSlopeStep, arm_mode) -
                        intensity_at(family, theta_operating - kSlopeStep, arm_mode)) /
                       (2.0 * kSlopeStep);
  r.delta_theta_linear =
      slope != 0.0 ? noise / std::abs(slope) : std::numeric_limits<double>::infinity();

  const auto excess = [&](double delta) {
    return std::abs(intensity_at(family, theta_operating + delta, arm_mode) - r.n) - noise;
  };
  double lo = 0.0;
  double hi = std::isfinite(r.delta_theta_linear) ? std::min(2.0 * r.delta_theta_linear, 0.5) : 0.5;
  while (excess(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > std::numbers::pi) {
      throw std::runtime_error("min_resolvable_phase: no sign change in bracket (flat response)");
    }
  }
  while (hi - lo > kBisectionRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  r.delta_theta_min = 0.5 * (lo + hi);
  r.closed_form_full_contrast = std::sqrt(r.normalized_variance / r.n);
  r.closed_form_reduced_contrast = std::sqrt(2.0 * r.normalized_variance / r.n);
  r.sql = std::sqrt(1.0 / r.n);
  r.improvement_factor = r.sql / r.delta_theta_min;
  r.coherent_delta_theta = std::numeric_limits<double>::quiet_NaN();
  r.gain_over_coherent = std::numeric_limits<double>::quiet_NaN();
  return r;
}

SensitivityReport min_resolvable_phase(const PipelineConfig& config, double theta_operating,
                                       std::size_t arm_mode) {
  SensitivityReport r = min_resolvable_phase(theta_family(config), theta_operating, arm_mode);
  PipelineConfig coherent = config;
  coherent.squeeze_db_a = 0.0;
  coherent.squeeze_db_b = 0.0;
  coherent.excess_a = 1.0;
  coherent.excess_b = 1.0;
  const SensitivityReport c = min_resolvable_phase(theta_family(coherent), theta_operating, arm_mode);
  r.coherent_delta_theta = c.delta_theta_min;
  r.gain_over_coherent = c.delta_theta_min / r.delta_theta_min;
  return r;
}

Eigen::VectorXd photocurrent_combination(const GaussianState& state, std::size_t mode1, double w1,
                                         std::size_t mode2, double w2) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(state.mode_count()));
  for (auto [mode, w] : {std::pair{mode1, w1}, std::pair{mode2, w2}}) {
    const Complex a = state.means.at(mode).amplitude;
    c(2 * mode) += w * a.real();
    c(2 * mode + 1) += w * a.imag();
  }
  return c;
}

Network dense_coding_network(const Network& network, std::size_t entangled_steps, std::size_t arm1,
                             const ModulationSignal& modulation) {
  if (entangled_steps > network.steps.size()) {
    throw std::invalid_argument("dense_coding_network: entangled_steps exceeds the network length");
  }
  Network modulated = network;
  modulated.steps.insert(modulated.steps.begin() + static_cast<std::ptrdiff_t>(entangled_steps),
                         modulation_step(arm1, modulation));
  return modulated;
}

DenseCodingReport dense_coding_readout(const Network& network, std::size_t entangled_steps,
                                       std::size_t arm1, std::size_t arm2,
                                       const ModulationSignal& modulation, double theta, bool strict) {
  const GaussianState entangled = propagate_prefix(network, entangled_steps);
  DenseCodingReport r;
  r.theta = theta;
  r.v_sq = squeezing_variance(entangled, arm1, arm2, Quadrature::X, Sign::plus, 1.0);
  r.v_sq_minus = squeezing_variance(entangled, arm1, arm2, Quadrature::Y, Sign::minus, 1.0);
  if (strict && std::abs(r.v_sq - r.v_sq_minus) > 1e-6) {
    throw PhysicsError("dense_coding_readout: asymmetric entanglement (V_sq+ != V_sq-)");
  }

  const GaussianState out = propagate(dense_coding_network(network, entangled_steps, arm1, modulation));
  const double n_total = out.means.at(arm1).photon_number() + out.means.at(arm2).photon_number();
  if (!(n_total > 0.0)) throw PhysicsError("dense_coding_readout: no light in the detected arms");
  r.alpha_sq = 0.5 * n_total;

  const double scale = r.alpha_sq / n_total;
  r.v_plus = scale * joint_variance(out, photocurrent_combination(out, arm1, 1.0, arm2, 1.0));
  r.v_minus = scale * joint_variance(out, photocurrent_combination(out, arm1, 1.0, arm2, -1.0));
  r.v_plus_closed = r.alpha_sq * (r.v_sq + modulation.v_x_mod);
  r.v_minus_closed = r.alpha_sq * (r.v_sq_minus + modulation.v_y_mod);
  r.coherent_bound_plus = r.alpha_sq * (1.0 + modulation.v_x_mod);
  r.coherent_bound_minus = r.alpha_sq * (1.0 + modulation.v_y_mod);
  r.snr_gain_x = (1.0 + modulation.v_x_mod) / (r.v_sq + modulation.v_x_mod);
  r.snr_gain_y = (1.0 + modulation.v_y_mod) / (r.v_sq_minus + modulation.v_y_mod);
  return r;
}

DenseCodingReport dense_coding_readout(const PipelineConfig& config, const ModulationSignal& modulation,
                                       double theta, bool strict) {
  PipelineConfig c = config;
  c.theta = theta;
  return dense_coding_readout(pipeline_network(c), kEntanglingSteps, 0, 1, modulation, theta, strict);
}

}  // namespace cvent
