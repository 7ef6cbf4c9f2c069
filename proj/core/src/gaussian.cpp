#include "cvent/gaussian.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace cvent {

namespace {

constexpr double kZeroAmplitude = 1e-300;

Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

void require_mode(std::size_t mode, std::size_t modes, const char* what) {
  if (mode >= modes) {
    std::ostringstream os;
    os << what << ": mode index " << mode << " out of range for " << modes << " modes";
    throw std::out_of_range(os.str());
  }
}

}  // namespace

QuadratureCovariance::QuadratureCovariance(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() % 2 != 0) {
    throw std::invalid_argument("covariance must be square with even dimension");
  }
  if (matrix_.size() == 0) return;
  const double asym = (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kIdentityTolerance * std::max(1.0, matrix_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("covariance must be symmetric");
  }
  // Store the exactly symmetric part so downstream congruences stay symmetric.
  matrix_ = 0.5 * (matrix_ + matrix_.transpose()).eval();
}

QuadratureCovariance QuadratureCovariance::identity(std::size_t modes) {
  return QuadratureCovariance(Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

Eigen::Matrix2d QuadratureCovariance::block(std::size_t mode) const {
  require_mode(mode, modes(), "covariance block");
  return matrix_.block<2, 2>(2 * mode, 2 * mode);
}

double QuadratureCovariance::uncertainty_product(std::size_t mode) const {
  return block(mode).determinant();
}

bool QuadratureCovariance::satisfies_uncertainty(double tolerance) const {
  if (matrix_.size() == 0) return true;
  const Eigen::MatrixXd omega = symplectic_form(modes());
  const Eigen::MatrixXcd h = matrix_.cast<Complex>() + Complex(0.0, 1.0) * omega.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tolerance;
}

double GaussianState::total_intensity() const {
  double total = 0.0;
  for (const auto& m : means) total += m.photon_number();
  return total;
}

std::size_t GaussianState::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw std::out_of_range("no mode labelled '" + label + "'");
}

void GaussianState::validate() const {
  if (cov.modes() != means.size()) {
    throw PhysicsError("mean vector length does not match covariance dimension");
  }
  if (labels.size() != means.size()) {
    throw PhysicsError("label count does not match mode count");
  }
  if (!cov.satisfies_uncertainty()) {
    throw PhysicsError("covariance violates the uncertainty relation");
  }
}

GaussianState combine(const std::vector<GaussianState>& parts) {
  std::size_t modes = 0;
  for (const auto& p : parts) modes += p.mode_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  GaussianState out;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    const auto n = static_cast<Eigen::Index>(2 * p.mode_count());
    m.block(2 * offset, 2 * offset, n, n) = p.cov.matrix();
    out.means.insert(out.means.end(), p.means.begin(), p.means.end());
    out.labels.insert(out.labels.end(), p.labels.begin(), p.labels.end());
    offset += p.mode_count();
  }
  out.cov = QuadratureCovariance(std::move(m));
  return out;
}

GaussianState new_coherent(Complex amplitude, std::string label) {
  GaussianState s;
  s.means = {ModeMean{amplitude}};
  s.cov = QuadratureCovariance::identity(1);
  s.labels = {std::move(label)};
  return s;
}

GaussianState new_squeezed_rotated(Complex amplitude, double squeeze_db, double excess_factor,
                                   double axis_offset, std::string label) {
  if (!(squeeze_db >= 0.0)) throw PhysicsError("squeeze_db must be >= 0");
  if (!(excess_factor >= 1.0)) {
    throw PhysicsError("excess_factor must be >= 1 (uncertainty relation)");
  }
  const double v_small = std::pow(10.0, -squeeze_db / 10.0);
  const double v_large = excess_factor / v_small;
  const double mean_angle = std::abs(amplitude) > kZeroAmplitude ? std::arg(amplitude) : 0.0;
  const Eigen::Matrix2d r = rotation(mean_angle + axis_offset);
  const Eigen::Matrix2d d = Eigen::Vector2d(v_small, v_large).asDiagonal();
  GaussianState s;
  s.means = {ModeMean{amplitude}};
  s.cov = QuadratureCovariance(r * d * r.transpose());
  s.labels = {std::move(label)};
  return s;
}

GaussianState new_squeezed_bright(Complex amplitude, double squeeze_db, double excess_factor,
                                  std::string label) {
  return new_squeezed_rotated(amplitude, squeeze_db, excess_factor, 0.0, std::move(label));
}

Eigen::MatrixXd symplectic_form(std::size_t modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (std::size_t j = 0; j < modes; ++j) {
    omega(2 * j, 2 * j + 1) = 1.0;
    omega(2 * j + 1, 2 * j) = -1.0;
  }
  return omega;
}

Eigen::Matrix2d complex_coefficient_block(Complex u) {
  Eigen::Matrix2d b;
  b << u.real(), -u.imag(), u.imag(), u.real();
  return b;
}

void check_element(const NetworkElement& element, std::size_t modes) {
  std::visit(
      [modes](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, PhaseShift>) {
          require_mode(e.mode, modes, "phase_shift");
        } else if constexpr (std::is_same_v<T, BeamSplitter>) {
          require_mode(e.first, modes, "beam_splitter");
          require_mode(e.second, modes, "beam_splitter");
          if (e.first == e.second) throw std::invalid_argument("beam_splitter: modes must differ");
          if (!(e.transmittance >= 0.0 && e.transmittance <= 1.0)) {
            throw std::invalid_argument("beam_splitter: transmittance must lie in [0, 1]");
          }
        } else {
          require_mode(e.mode_x, modes, "polarizing_combiner");
          require_mode(e.mode_y, modes, "polarizing_combiner");
          if (e.mode_x == e.mode_y) {
            throw std::invalid_argument("polarizing_combiner: modes must differ");
          }
        }
      },
      element);
}

Eigen::MatrixXcd mode_matrix(const NetworkElement& element, std::size_t modes) {
  check_element(element, modes);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(modes, modes);
  if (const auto* p = std::get_if<PhaseShift>(&element)) {
    u(p->mode, p->mode) = std::polar(1.0, p->angle);
  } else if (const auto* b = std::get_if<BeamSplitter>(&element)) {
    const double t = std::sqrt(b->transmittance);
    const double r = std::sqrt(1.0 - b->transmittance);
    const Complex e = std::polar(1.0, b->phase);
    u(b->first, b->first) = t;
    u(b->first, b->second) = e * r;
    u(b->second, b->first) = r;
    u(b->second, b->second) = -e * t;
  }
  return u;
}

Eigen::MatrixXd symplectic_matrix(const NetworkElement& element, std::size_t modes) {
  const Eigen::MatrixXcd u = mode_matrix(element, modes);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (std::size_t i = 0; i < modes; ++i) {
    for (std::size_t j = 0; j < modes; ++j) {
      if (u(i, j) != Complex(0.0, 0.0)) {
        s.block<2, 2>(2 * i, 2 * j) = complex_coefficient_block(u(i, j));
      }
    }
  }
  return s;
}

GaussianState apply_element(const GaussianState& state, const NetworkElement& element) {
  const std::size_t n = state.mode_count();
  check_element(element, n);
  GaussianState out = state;
  if (const auto* pc = std::get_if<PolarizingCombiner>(&element)) {
    out.labels[pc->mode_x] = pc->beam + ".x";
    out.labels[pc->mode_y] = pc->beam + ".y";
    return out;
  }
  const Eigen::MatrixXcd u = mode_matrix(element, n);
  Eigen::VectorXcd alpha(n);
  for (std::size_t j = 0; j < n; ++j) alpha(j) = state.means[j].amplitude;
  const Eigen::VectorXcd beta = u * alpha;
  for (std::size_t j = 0; j < n; ++j) out.means[j].amplitude = beta(j);
  const Eigen::MatrixXd s = symplectic_matrix(element, n);
  out.cov = QuadratureCovariance(s * state.cov.matrix() * s.transpose());
  return out;
}

GaussianState apply_phase_shift(const GaussianState& state, std::size_t mode, double angle) {
  return apply_element(state, PhaseShift{mode, angle});
}

GaussianState apply_beam_splitter(const GaussianState& state, std::size_t first, std::size_t second,
                                  double transmittance, double phase) {
  return apply_element(state, BeamSplitter{first, second, transmittance, phase});
}

GaussianState apply_polarizing_combiner(const GaussianState& state, std::size_t mode_x,
                                        std::size_t mode_y, const std::string& beam) {
  return apply_element(state, PolarizingCombiner{mode_x, mode_y, beam});
}

double joint_variance(const GaussianState& state, const Eigen::VectorXd& coefficients) {
  const auto& m = state.cov.matrix();
  if (coefficients.size() != m.rows()) {
    throw std::invalid_argument("joint_variance: coefficient vector length must equal 2N");
  }
  return coefficients.dot(m * coefficients);
}

Eigen::VectorXd quadrature_axis(const GaussianState& state, std::size_t mode, Quadrature q,
                                Frame frame) {
  const std::size_t n = state.mode_count();
  require_mode(mode, n, "quadrature_axis");
  double angle = 0.0;
  if (frame == Frame::mean_field && std::abs(state.means[mode].amplitude) > kZeroAmplitude) {
    angle = state.means[mode].phase();
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n);
  if (q == Quadrature::X) {
    c(2 * mode) = std::cos(angle);
    c(2 * mode + 1) = std::sin(angle);
  } else {
    c(2 * mode) = -std::sin(angle);
    c(2 * mode + 1) = std::cos(angle);
  }
  return c;
}

double quadrature_variance(const GaussianState& state, std::size_t mode, Quadrature q, Frame frame) {
  return joint_variance(state, quadrature_axis(state, mode, q, frame));
}

GaussianState coherent_reference(const GaussianState& state) {
  GaussianState out = state;
  out.cov = QuadratureCovariance::identity(state.mode_count());
  return out;
}

}  // namespace cvent
