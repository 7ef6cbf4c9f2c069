#pragma once

#include <functional>
#include <vector>

#include "cvent/gaussian.hpp"

namespace cvent {

/// Independent zero-mean Gaussian displacement noise added to one mode's
/// amplitude (along the local mean field) and phase quadratures. This is a
/// classical modulation, not a lossless element: it has no symplectic matrix.
struct GaussianModulation {
  std::size_t mode = 0;
  double amplitude_variance = 0.0;
  double phase_variance = 0.0;
  friend bool operator==(const GaussianModulation&, const GaussianModulation&) = default;
};

using NetworkStep = std::variant<PhaseShift, BeamSplitter, PolarizingCombiner, GaussianModulation>;

/// Input state followed by an ordered list of steps. This is the shared
/// description consumed both by analytic propagation and by the Monte-Carlo
/// oracle.
struct Network {
  GaussianState input;
  std::vector<NetworkStep> steps;
};

/// A one-parameter family of networks (e.g. indexed by the phase theta).
using NetworkFamily = std::function<Network(double)>;

NetworkStep to_step(const NetworkElement& element);

GaussianState apply_modulation(const GaussianState& state, const GaussianModulation& modulation);

GaussianState apply_step(const GaussianState& state, const NetworkStep& step);

/// Applies every step in order; the result after the first `count` steps when
/// `count` is given.
GaussianState propagate(const Network& network);
GaussianState propagate_prefix(const Network& network, std::size_t count);

}  // namespace cvent
