#pragma once

#include <cstddef>

#include "cvent/gaussian.hpp"

namespace cvent {

enum class Sign { plus, minus };

/// Which amplitude correlation a sign pairing tests: (X+, Y-) detects
/// anti-correlated amplitudes with correlated phases, (X-, Y+) the reverse.
enum class AmplitudeCorrelation { anticorrelated, correlated };

/// Sums this close to 2 are round-off on the separable boundary and are not
/// reported as non-separable.
inline constexpr double kCriterionRoundoff = 1e-12;

/// criterion_sum < 2 beyond round-off.
inline bool is_nonseparable(double criterion_sum) { return criterion_sum < 2.0 - kCriterionRoundoff; }

struct EntanglementReport {
  double gain = 1.0;
  double v_sq_x = 0.0;
  double v_sq_y = 0.0;
  double criterion_sum = 0.0;
  bool nonseparable = false;
  AmplitudeCorrelation sign_convention = AmplitudeCorrelation::anticorrelated;
};

struct GainOptimum {
  double gain = 0.0;
  double variance = 0.0;
};

/// Gain-weighted squeezing variance of two bright modes,
///
///   V(sqrt(n1) dQ1 +/- g sqrt(n2) dQ2) / (n1 + g^2 n2),
///
/// with dQ the mean-field-frame quadrature. Equal to 1 for coherent modes at
/// any gain. Throws PhysicsError when the shot-noise reference vanishes.
double squeezing_variance(const GaussianState& state, std::size_t mode1, std::size_t mode2,
                          Quadrature q, Sign sign, double gain);

/// Numerator coefficient vector (lab basis) used by squeezing_variance.
Eigen::VectorXd squeezing_coefficients(const GaussianState& state, std::size_t mode1,
                                       std::size_t mode2, Quadrature q, Sign sign, double gain);

/// n1 + g^2 n2.
double shot_noise_reference(const GaussianState& state, std::size_t mode1, std::size_t mode2,
                            double gain);

/// Minimizes squeezing_variance over g in [0, 10]: grid bracket followed by
/// golden-section refinement to 1e-8. Ties resolve to the smallest gain.
GainOptimum optimal_gain(const GaussianState& state, std::size_t mode1, std::size_t mode2,
                         Quadrature q, Sign sign);

/// Evaluates both sign pairings at a fixed gain and reports the smaller sum.
EntanglementReport duan_criterion(const GaussianState& state, std::size_t mode1, std::size_t mode2,
                                  double gain);

/// Same as duan_criterion with the gain chosen to minimize the criterion sum.
EntanglementReport duan_criterion_optimized(const GaussianState& state, std::size_t mode1,
                                            std::size_t mode2);

/// Golden-section minimizer shared by the gain optimizations.
template <typename F>
GainOptimum minimize_gain(F&& f, double lo = 0.0, double hi = 10.0, double tolerance = 1e-8);

}  // namespace cvent

#include "cvent/detail/minimize.ipp"
