#include "cvent/entanglement.hpp"

#include <cmath>

namespace cvent {

namespace {

void require_distinct(const GaussianState& state, std::size_t mode1, std::size_t mode2) {
  if (mode1 >= state.mode_count() || mode2 >= state.mode_count()) {
    throw std::out_of_range("entanglement: mode index out of range");
  }
  if (mode1 == mode2) throw std::invalid_argument("entanglement: modes must be distinct");
}

double signed_gain(Sign sign, double gain) { return sign == Sign::plus ? gain : -gain; }

EntanglementReport make_report(double gain, double vx, double vy, AmplitudeCorrelation corr) {
  EntanglementReport r;
  r.gain = gain;
  r.v_sq_x = vx;
  r.v_sq_y = vy;
  r.criterion_sum = vx + vy;
  r.nonseparable = is_nonseparable(r.criterion_sum);
  r.sign_convention = corr;
  return r;
}

struct Pairing {
  Sign x;
  Sign y;
  AmplitudeCorrelation correlation;
};

constexpr Pairing kPairings[] = {
    {Sign::plus, Sign::minus, AmplitudeCorrelation::anticorrelated},
    {Sign::minus, Sign::plus, AmplitudeCorrelation::correlated},
};

}  // namespace

double shot_noise_reference(const GaussianState& state, std::size_t mode1, std::size_t mode2,
                            double gain) {
  require_distinct(state, mode1, mode2);
  return state.means[mode1].photon_number() + gain * gain * state.means[mode2].photon_number();
}

Eigen::VectorXd squeezing_coefficients(const GaussianState& state, std::size_t mode1,
                                       std::size_t mode2, Quadrature q, Sign sign, double gain) {
  require_distinct(state, mode1, mode2);
  const double s1 = std::abs(state.means[mode1].amplitude);
  const double s2 = std::abs(state.means[mode2].amplitude);
  return s1 * quadrature_axis(state, mode1, q, Frame::mean_field) +
         signed_gain(sign, gain) * s2 * quadrature_axis(state, mode2, q, Frame::mean_field);
}

double squeezing_variance(const GaussianState& state, std::size_t mode1, std::size_t mode2,
                          Quadrature q, Sign sign, double gain) {
  const double reference = shot_noise_reference(state, mode1, mode2, gain);
  if (!(reference > 0.0)) {
    throw PhysicsError("squeezing_variance: shot-noise reference is zero (dark modes)");
  }
  return joint_variance(state, squeezing_coefficients(state, mode1, mode2, q, sign, gain)) / reference;
}

GainOptimum optimal_gain(const GaussianState& state, std::size_t mode1, std::size_t mode2,
                         Quadrature q, Sign sign) {
  require_distinct(state, mode1, mode2);
  if (!(state.means[mode1].photon_number() > 0.0)) {
    // g = 0 would leave a zero reference; the minimization is degenerate.
    throw PhysicsError("optimal_gain: first mode is dark, shot-noise reference degenerate");
  }
  return minimize_gain(
      [&](double g) { return squeezing_variance(state, mode1, mode2, q, sign, g); });
}

EntanglementReport duan_criterion(const GaussianState& state, std::size_t mode1, std::size_t mode2,
                                  double gain) {
  EntanglementReport best;
  bool first = true;
  for (const auto& p : kPairings) {
    const double vx = squeezing_variance(state, mode1, mode2, Quadrature::X, p.x, gain);
    const double vy = squeezing_variance(state, mode1, mode2, Quadrature::Y, p.y, gain);
    auto r = make_report(gain, vx, vy, p.correlation);
    if (first || r.criterion_sum < best.criterion_sum) best = r;
    first = false;
  }
  return best;
}

EntanglementReport duan_criterion_optimized(const GaussianState& state, std::size_t mode1,
                                            std::size_t mode2) {
  require_distinct(state, mode1, mode2);
  if (!(state.means[mode1].photon_number() > 0.0)) {
    throw PhysicsError("duan_criterion: first mode is dark, shot-noise reference degenerate");
  }
  EntanglementReport best;
  bool first = true;
  for (const auto& p : kPairings) {
    const auto sum = [&](double g) {
      return squeezing_variance(state, mode1, mode2, Quadrature::X, p.x, g) +
             squeezing_variance(state, mode1, mode2, Quadrature::Y, p.y, g);
    };
    const GainOptimum opt = minimize_gain(sum);
    auto r = make_report(opt.gain,
                         squeezing_variance(state, mode1, mode2, Quadrature::X, p.x, opt.gain),
                         squeezing_variance(state, mode1, mode2, Quadrature::Y, p.y, opt.gain),
                         p.correlation);
    if (first || r.criterion_sum < best.criterion_sum) best = r;
    first = false;
  }
  return best;
}

}  // namespace cvent
