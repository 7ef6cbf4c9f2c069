#include "cvent/network.hpp"

#include <cmath>

namespace cvent {

NetworkStep to_step(const NetworkElement& element) {
  return std::visit([](const auto& e) -> NetworkStep { return e; }, element);
}

GaussianState apply_modulation(const GaussianState& state, const GaussianModulation& modulation) {
  if (modulation.mode >= state.mode_count()) {
    throw std::out_of_range("modulation: mode index out of range");
  }
  if (!(modulation.amplitude_variance >= 0.0) || !(modulation.phase_variance >= 0.0)) {
    throw std::invalid_argument("modulation: variances must be >= 0");
  }
  const Eigen::VectorXd ax = quadrature_axis(state, modulation.mode, Quadrature::X, Frame::mean_field);
  const Eigen::VectorXd ay = quadrature_axis(state, modulation.mode, Quadrature::Y, Frame::mean_field);
  Eigen::MatrixXd m = state.cov.matrix();
  m += modulation.amplitude_variance * ax * ax.transpose();
  m += modulation.phase_variance * ay * ay.transpose();
  GaussianState out = state;
  out.cov = QuadratureCovariance(std::move(m));
  return out;
}

GaussianState apply_step(const GaussianState& state, const NetworkStep& step) {
  return std::visit(
      [&state](const auto& s) -> GaussianState {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GaussianModulation>) {
          return apply_modulation(state, s);
        } else {
          return apply_element(state, NetworkElement{s});
        }
      },
      step);
}

GaussianState propagate_prefix(const Network& network, std::size_t count) {
  if (count > network.steps.size()) throw std::out_of_range("propagate_prefix: count too large");
  GaussianState s = network.input;
  for (std::size_t i = 0; i < count; ++i) s = apply_step(s, network.steps[i]);
  return s;
}

GaussianState propagate(const Network& network) {
  return propagate_prefix(network, network.steps.size());
}

}  // namespace cvent
