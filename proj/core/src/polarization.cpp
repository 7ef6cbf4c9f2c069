#include "cvent/polarization.hpp"

#include <cmath>

namespace cvent {

namespace {

void check_beam(const GaussianState& state, PolarizedBeam beam) {
  if (beam.mode_x >= state.mode_count() || beam.mode_y >= state.mode_count()) {
    throw std::out_of_range("polarized beam: mode index out of range");
  }
  if (beam.mode_x == beam.mode_y) {
    throw std::invalid_argument("polarized beam: x and y modes must differ");
  }
}

// 2 Re(beta^* da) = Re(beta) dX + Im(beta) dY
void add_intensity_like(Eigen::MatrixXd& forms, int row, std::size_t mode, Complex beta, double weight) {
  forms(row, 2 * mode) += weight * beta.real();
  forms(row, 2 * mode + 1) += weight * beta.imag();
}

// 2 Im(beta^* da) = Re(beta) dY - Im(beta) dX
void add_phase_like(Eigen::MatrixXd& forms, int row, std::size_t mode, Complex beta, double weight) {
  forms(row, 2 * mode) -= weight * beta.imag();
  forms(row, 2 * mode + 1) += weight * beta.real();
}

}  // namespace

StokesVector stokes_means(const GaussianState& state, PolarizedBeam beam) {
  check_beam(state, beam);
  const Complex ax = state.means[beam.mode_x].amplitude;
  const Complex ay = state.means[beam.mode_y].amplitude;
  const Complex cross = std::conj(ax) * ay;
  return {std::norm(ax) + std::norm(ay), std::norm(ax) - std::norm(ay), 2.0 * cross.real(),
          2.0 * cross.imag()};
}

Eigen::MatrixXd stokes_linear_forms(const GaussianState& state, PolarizedBeam beam) {
  check_beam(state, beam);
  const std::size_t n = state.mode_count();
  const Complex ax = state.means[beam.mode_x].amplitude;
  const Complex ay = state.means[beam.mode_y].amplitude;
  Eigen::MatrixXd forms = Eigen::MatrixXd::Zero(4, 2 * n);
  // dn_k = 2 Re(alpha_k^* da_k)
  add_intensity_like(forms, 0, beam.mode_x, ax, 1.0);
  add_intensity_like(forms, 0, beam.mode_y, ay, 1.0);
  add_intensity_like(forms, 1, beam.mode_x, ax, 1.0);
  add_intensity_like(forms, 1, beam.mode_y, ay, -1.0);
  // dS2 = 2 Re(alpha_x^* da_y) + 2 Re(alpha_y^* da_x)
  add_intensity_like(forms, 2, beam.mode_y, ax, 1.0);
  add_intensity_like(forms, 2, beam.mode_x, ay, 1.0);
  // dS3 = 2 Im(alpha_x^* da_y) - 2 Im(alpha_y^* da_x)
  add_phase_like(forms, 3, beam.mode_y, ax, 1.0);
  add_phase_like(forms, 3, beam.mode_x, ay, -1.0);
  return forms;
}

Eigen::Matrix4d stokes_fluct_cov(const GaussianState& state, PolarizedBeam beam) {
  check_beam(state, beam);
  if (state.means[beam.mode_x].photon_number() == 0.0 &&
      state.means[beam.mode_y].photon_number() == 0.0) {
    throw PhysicsError("stokes_fluct_cov: both amplitudes are zero, linearization undefined");
  }
  const Eigen::MatrixXd forms = stokes_linear_forms(state, beam);
  Eigen::Matrix4d c = forms * state.cov.matrix() * forms.transpose();
  return 0.5 * (c + c.transpose());
}

StokesSummary stokes_summary(const GaussianState& state, PolarizedBeam beam) {
  return {stokes_means(state, beam), stokes_fluct_cov(state, beam)};
}

std::array<bool, 3> is_polarization_squeezed(const StokesSummary& summary,
                                             const StokesSummary& coherent_reference) {
  const double scale = std::max(1.0, std::abs(coherent_reference.means[0]));
  for (int k = 0; k < 4; ++k) {
    if (std::abs(summary.means[k] - coherent_reference.means[k]) > 1e-6 * scale) {
      throw std::invalid_argument("is_polarization_squeezed: summaries have different means");
    }
  }
  std::array<bool, 3> out{};
  for (int j = 1; j <= 3; ++j) {
    out[j - 1] = summary.fluct_cov(j, j) < coherent_reference.fluct_cov(j, j);
  }
  return out;
}

Eigen::VectorXd stokes_combination(const GaussianState& state, PolarizedBeam beam_a,
                                   PolarizedBeam beam_b, int component, Sign sign, double gain) {
  if (component < 0 || component > 3) throw std::invalid_argument("Stokes component must be 0..3");
  const Eigen::MatrixXd fa = stokes_linear_forms(state, beam_a);
  const Eigen::MatrixXd fb = stokes_linear_forms(state, beam_b);
  const double g = sign == Sign::plus ? gain : -gain;
  return (fa.row(component) + g * fb.row(component)).transpose();
}

EntanglementReport polarization_nonseparability(const GaussianState& state, PolarizedBeam beam_a,
                                                PolarizedBeam beam_b, double gain) {
  check_beam(state, beam_a);
  check_beam(state, beam_b);
  for (std::size_t a : {beam_a.mode_x, beam_a.mode_y}) {
    if (a == beam_b.mode_x || a == beam_b.mode_y) {
      throw std::invalid_argument("polarization_nonseparability: beams must be disjoint");
    }
  }
  const GaussianState reference = coherent_reference(state);
  const auto normalized = [&](int component, Sign sign) {
    const Eigen::VectorXd c = stokes_combination(state, beam_a, beam_b, component, sign, gain);
    const double shot_noise = joint_variance(reference, c);
    if (!(shot_noise > 0.0)) {
      throw PhysicsError("polarization_nonseparability: zero shot-noise reference");
    }
    return joint_variance(state, c) / shot_noise;
  };
  EntanglementReport r;
  r.gain = gain;
  r.v_sq_x = normalized(1, Sign::plus);
  r.v_sq_y = normalized(3, Sign::minus);
  r.criterion_sum = r.v_sq_x + r.v_sq_y;
  r.nonseparable = is_nonseparable(r.criterion_sum);
  r.sign_convention = AmplitudeCorrelation::anticorrelated;
  return r;
}

}  // namespace cvent
