/**
 * @file gaussian.hpp
 * @brief Linearized Gaussian description of bright optical modes.
 *
 * Each mode j carries a complex mean amplitude alpha_j and zero-mean
 * quadrature fluctuations (dX_j, dY_j) with X = a^dag + a and
 * Y = i(a^dag - a). The covariance is shot-noise normalized: a coherent
 * (or vacuum) mode has the 2x2 identity block, and [dX_j, dY_k] = 2i delta_jk,
 * so every physical mode obeys V(dX)V(dY) - Cov(dX,dY)^2 >= 1.
 *
 * The fluctuation basis is ordered (dX_0, dY_0, dX_1, dY_1, ...).
 */

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace cvent {

using Complex = std::complex<double>;

/// Absolute tolerance for analytic identities (symmetry, symplecticity).
inline constexpr double kIdentityTolerance = 1e-12;

/// Raised when a request would produce an unphysical state or is otherwise
/// outside the model's domain (e.g. excess_factor < 1).
class PhysicsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Quadrature { X, Y };

/// Reference frame used to pick "amplitude" and "phase" quadratures of a mode.
/// `mean_field` rotates the quadrature axes onto the direction of the mode's
/// mean amplitude; a mode with zero mean falls back to the lab frame.
enum class Frame { lab, mean_field };

struct ModeMean {
  Complex amplitude{0.0, 0.0};

  double photon_number() const { return std::norm(amplitude); }
  double mean_x() const { return 2.0 * amplitude.real(); }
  double mean_y() const { return 2.0 * amplitude.imag(); }
  double phase() const { return std::arg(amplitude); }
};

class QuadratureCovariance {
 public:
  /// Validates shape (square, even dimension) and symmetry.
  explicit QuadratureCovariance(Eigen::MatrixXd matrix);

  static QuadratureCovariance identity(std::size_t modes);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  std::size_t modes() const { return static_cast<std::size_t>(matrix_.rows()) / 2; }

  Eigen::Matrix2d block(std::size_t mode) const;

  /// V(dX)V(dY) - Cov(dX,dY)^2 for one mode; >= 1 for physical states.
  double uncertainty_product(std::size_t mode) const;

  /// Full Robertson-Schroedinger condition M + i*Omega >= 0, which implies
  /// positive semidefiniteness and every per-mode product bound.
  bool satisfies_uncertainty(double tolerance = 1e-9) const;

  double determinant() const { return matrix_.determinant(); }

  friend bool operator==(const QuadratureCovariance&, const QuadratureCovariance&) = default;

 private:
  Eigen::MatrixXd matrix_;
};

struct GaussianState {
  std::vector<ModeMean> means;
  QuadratureCovariance cov = QuadratureCovariance::identity(0);
  std::vector<std::string> labels;

  std::size_t mode_count() const { return means.size(); }
  double total_intensity() const;

  /// Index of the mode with the given label; throws std::out_of_range.
  std::size_t index_of(const std::string& label) const;

  /// Throws PhysicsError when the container invariants fail.
  void validate() const;
};

/// Direct sum of independent states; labels are concatenated.
GaussianState combine(const std::vector<GaussianState>& parts);

GaussianState new_coherent(Complex amplitude, std::string label = "0");

/// Bright mode with its small-variance axis along the mean field (lab X for a
/// zero amplitude). V(amplitude) = 10^(-squeeze_db/10),
/// V(phase) = excess_factor / V(amplitude).
GaussianState new_squeezed_bright(Complex amplitude, double squeeze_db, double excess_factor = 1.0,
                                  std::string label = "0");

/// Same as new_squeezed_bright with the small-variance axis rotated by
/// `axis_offset` radians away from the mean-field direction.
GaussianState new_squeezed_rotated(Complex amplitude, double squeeze_db, double excess_factor,
                                   double axis_offset, std::string label = "0");

// --- Linear-optical elements -------------------------------------------------

struct PhaseShift {
  std::size_t mode = 0;
  double angle = 0.0;
  friend bool operator==(const PhaseShift&, const PhaseShift&) = default;
};

/// Output modes (c at `first`, d at `second`):
///   c = sqrt(T) a + e^{i phase} sqrt(1-T) b
///   d = sqrt(1-T) a - e^{i phase} sqrt(T) b
struct BeamSplitter {
  std::size_t first = 0;
  std::size_t second = 1;
  double transmittance = 0.5;
  double phase = 0.0;
  friend bool operator==(const BeamSplitter&, const BeamSplitter&) = default;
};

/// Joins two orthogonally polarized modes into one labelled beam. The
/// quadrature map is the identity; only the mode labels change to
/// "<beam>.x" and "<beam>.y".
struct PolarizingCombiner {
  std::size_t mode_x = 0;
  std::size_t mode_y = 1;
  std::string beam;
  friend bool operator==(const PolarizingCombiner&, const PolarizingCombiner&) = default;
};

using NetworkElement = std::variant<PhaseShift, BeamSplitter, PolarizingCombiner>;

/// Standard symplectic form, block-diagonal with [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(std::size_t modes);

/// 2x2 real block that a complex mode coefficient u induces on (dX, dY).
Eigen::Matrix2d complex_coefficient_block(Complex u);

/// Full 2N x 2N symplectic matrix for the element acting on `modes` modes.
Eigen::MatrixXd symplectic_matrix(const NetworkElement& element, std::size_t modes);

/// Unitary mode-operator matrix (N x N) for the element.
Eigen::MatrixXcd mode_matrix(const NetworkElement& element, std::size_t modes);

void check_element(const NetworkElement& element, std::size_t modes);

GaussianState apply_element(const GaussianState& state, const NetworkElement& element);
GaussianState apply_phase_shift(const GaussianState& state, std::size_t mode, double angle);
GaussianState apply_beam_splitter(const GaussianState& state, std::size_t first, std::size_t second,
                                  double transmittance, double phase);
GaussianState apply_polarizing_combiner(const GaussianState& state, std::size_t mode_x,
                                        std::size_t mode_y, const std::string& beam);

// --- Observables ---------------------------------------------------------------

/// c^T M c for a coefficient vector over the fluctuation basis.
double joint_variance(const GaussianState& state, const Eigen::VectorXd& coefficients);

/// Unit coefficient vector selecting one quadrature of one mode.
Eigen::VectorXd quadrature_axis(const GaussianState& state, std::size_t mode, Quadrature q,
                                Frame frame = Frame::mean_field);

/// Quadrature variance of a single mode in the requested frame.
double quadrature_variance(const GaussianState& state, std::size_t mode, Quadrature q,
                           Frame frame = Frame::lab);

/// The same mean amplitudes with an identity covariance (coherent reference).
GaussianState coherent_reference(const GaussianState& state);

}  // namespace cvent
