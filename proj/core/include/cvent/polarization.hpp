/**
 * @file polarization.hpp
 * @brief Stokes-operator algebra for bright two-polarization beams.
 *
 *   S0 = n_x + n_y               S1 = n_x - n_y
 *   S2 = a_x^dag a_y + a_y^dag a_x
 *   S3 = i (a_y^dag a_x - a_x^dag a_y)
 *
 * Fluctuations are linearized around the mean field: each dS_k is a linear
 * form in (dX_x, dY_x, dX_y, dY_y) whose coefficients are the mean
 * amplitudes. Second-order terms are dropped, which requires bright beams
 * (|alpha|^2 well above 1e4 photons for sub-percent bias).
 */

#pragma once

#include <array>
#include <cstddef>

#include "cvent/entanglement.hpp"
#include "cvent/gaussian.hpp"

namespace cvent {

struct PolarizedBeam {
  std::size_t mode_x = 0;
  std::size_t mode_y = 1;
  friend bool operator==(const PolarizedBeam&, const PolarizedBeam&) = default;
};

using StokesVector = std::array<double, 4>;

struct StokesSummary {
  StokesVector means{};
  Eigen::Matrix4d fluct_cov = Eigen::Matrix4d::Zero();
};

/// Stokes means to leading order in the linearization.
StokesVector stokes_means(const GaussianState& state, PolarizedBeam beam);

/// Rows k = 0..3 hold the coefficients of dS_k over the full 2N basis.
Eigen::MatrixXd stokes_linear_forms(const GaussianState& state, PolarizedBeam beam);

/// Covariance of (dS0, dS1, dS2, dS3). Throws PhysicsError when both
/// amplitudes vanish (the linearization has no leading term).
Eigen::Matrix4d stokes_fluct_cov(const GaussianState& state, PolarizedBeam beam);

StokesSummary stokes_summary(const GaussianState& state, PolarizedBeam beam);

/// Component-wise V_j < V_j^coh for j = 1, 2, 3. Throws std::invalid_argument
/// when the two summaries' means differ by more than 1e-6 relative.
std::array<bool, 3> is_polarization_squeezed(const StokesSummary& summary,
                                             const StokesSummary& coherent_reference);

/// V_sq+(dS1) + V_sq-(dS3) across beams A and B, each variance normalized to
/// the same linear combination evaluated on the coherent reference (identical
/// means, identity covariance).
EntanglementReport polarization_nonseparability(const GaussianState& state, PolarizedBeam beam_a,
                                                PolarizedBeam beam_b, double gain);

/// Gain-weighted Stokes combination dS_k(A) +/- g dS_k(B) as a coefficient
/// vector over the state's fluctuation basis.
Eigen::VectorXd stokes_combination(const GaussianState& state, PolarizedBeam beam_a,
                                   PolarizedBeam beam_b, int component, Sign sign, double gain);

}  // namespace cvent
