/**
 * @file mc_oracle.hpp
 * @brief Monte-Carlo verifier for the analytic covariance propagation.
 *
 * Input fluctuations are drawn from the input covariance; each sample is then
 * pushed through the network as a vector of complex amplitudes
 * a_j = alpha_j + (dX_j + i dY_j)/2, using element maps written out here
 * rather than the symplectic matrices. Requested forms are evaluated on the
 * output samples: linear quadrature forms, exact photon numbers |a|^2, and
 * exact (unlinearized) Stokes parameters.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cvent/network.hpp"

namespace cvent::mc {

inline constexpr std::size_t kMinSamples = 1000;
inline constexpr const char* kGenerator = "mt19937_64/splitmix64-chunk-seeds";
inline constexpr const char* kTransform = "box-muller(53-bit uniforms)";
inline constexpr std::size_t kChunkSize = std::size_t{1} << 14;

/// sum_k c_k dq_k over the output fluctuations, ordered as in QuadratureCovariance.
struct Linear {
  Eigen::VectorXd coefficients;
};

/// sum_j w_j |a_j|^2.
struct Intensity {
  std::vector<std::pair<std::size_t, double>> weights;
};

struct StokesTerm {
  std::size_t mode_x = 0;
  std::size_t mode_y = 0;
  int component = 0;  ///< 0..3
  double weight = 1.0;
};

/// sum of weighted exact Stokes parameters of one or more beams.
struct Stokes {
  std::vector<StokesTerm> terms;
};

using Form = std::variant<Linear, Intensity, Stokes>;

struct Request {
  std::string name;
  Form form;
};

struct Estimate {
  double mean = 0.0;
  double variance = 0.0;
  double standard_error = 0.0;           ///< of the mean, sample_std / sqrt(n)
  double variance_standard_error = 0.0;  ///< of the variance, sqrt((m4 - m2^2) / n)

  /// |variance - expected| <= k * variance_standard_error (+ extra).
  bool variance_matches(double expected, double k = 3.0, double extra = 0.0) const;
};

struct SampleRun {
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  std::string generator = kGenerator;
  std::string transform = kTransform;
  std::map<std::string, Estimate> estimates;

  const Estimate& at(const std::string& name) const { return estimates.at(name); }
};

/// Throws std::invalid_argument for n_samples < kMinSamples, duplicate request
/// names, an input covariance that is not positive definite, or any element /
/// request referring to a missing mode.
SampleRun estimate_variances(const Network& network, const std::vector<Request>& requests,
                             std::uint64_t seed, std::size_t n_samples);

}  // namespace cvent::mc
