#include "cvent/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace cvent::mc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1], u2 in [0, 1)
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

 private:
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("estimate_variances: ") + what);
}

void check_step(const NetworkStep& step, std::size_t n) {
  std::visit(
      [n](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PhaseShift>) {
          require(s.mode < n && std::isfinite(s.angle), "malformed phase shift");
        } else if constexpr (std::is_same_v<T, BeamSplitter>) {
          require(s.first < n && s.second < n && s.first != s.second, "malformed beam splitter modes");
          require(s.transmittance >= 0.0 && s.transmittance <= 1.0 && std::isfinite(s.phase),
                  "malformed beam splitter parameters");
        } else if constexpr (std::is_same_v<T, PolarizingCombiner>) {
          require(s.mode_x < n && s.mode_y < n && s.mode_x != s.mode_y, "malformed polarizing combiner");
        } else {
          require(s.mode < n && s.amplitude_variance >= 0.0 && s.phase_variance >= 0.0,
                  "malformed modulation");
        }
      },
      step);
}

void check_request(const Request& r, std::size_t n) {
  std::visit(
      [n](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Linear>) {
          require(static_cast<std::size_t>(f.coefficients.size()) == 2 * n,
                  "linear request length must equal 2N");
        } else if constexpr (std::is_same_v<T, Intensity>) {
          for (const auto& [m, w] : f.weights) require(m < n, "intensity request mode out of range");
        } else {
          for (const auto& t : f.terms) {
            require(t.mode_x < n && t.mode_y < n && t.mode_x != t.mode_y, "Stokes request modes");
            require(t.component >= 0 && t.component <= 3, "Stokes component must be 0..3");
          }
        }
      },
      r.form);
}

// Apply one step in place to a vector of complex amplitudes, drawing
// modulation noise from `rng`. `mean` is the oracle's own propagated mean.
void apply(const NetworkStep& step, std::vector<Complex>& a, const std::vector<Complex>& mean,
           NormalSource* rng) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PhaseShift>) {
          a[s.mode] *= std::polar(1.0, s.angle);
        } else if constexpr (std::is_same_v<T, BeamSplitter>) {
          const double t = std::sqrt(s.transmittance);
          const double r = std::sqrt(1.0 - s.transmittance);
          const Complex e = std::polar(1.0, s.phase);
          const Complex x = a[s.first];
          const Complex y = a[s.second];
          a[s.first] = t * x + e * r * y;
          a[s.second] = r * x - e * t * y;
        } else if constexpr (std::is_same_v<T, GaussianModulation>) {
          if (rng == nullptr) return;
          const Complex m = mean[s.mode];
          const Complex dir = std::abs(m) > 0.0 ? m / std::abs(m) : Complex(1.0, 0.0);
          const double gx = rng->next() * std::sqrt(s.amplitude_variance);
          const double gy = rng->next() * std::sqrt(s.phase_variance);
          a[s.mode] += dir * Complex(gx, gy) * 0.5;
        }
        // polarizing combiner: relabelling only
      },
      step);
}

double evaluate(const Form& form, const std::vector<Complex>& a, const std::vector<Complex>& mean) {
  return std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        double v = 0.0;
        if constexpr (std::is_same_v<T, Linear>) {
          for (std::size_t j = 0; j < a.size(); ++j) {
            const Complex d = a[j] - mean[j];
            v += f.coefficients(2 * j) * 2.0 * d.real() + f.coefficients(2 * j + 1) * 2.0 * d.imag();
          }
        } else if constexpr (std::is_same_v<T, Intensity>) {
          for (const auto& [m, w] : f.weights) v += w * std::norm(a[m]);
        } else {
          for (const auto& t : f.terms) {
            const Complex ax = a[t.mode_x];
            const Complex ay = a[t.mode_y];
            const Complex cross = std::conj(ax) * ay;
            double s = 0.0;
            switch (t.component) {
              case 0: s = std::norm(ax) + std::norm(ay); break;
              case 1: s = std::norm(ax) - std::norm(ay); break;
              case 2: s = 2.0 * cross.real(); break;
              default: s = 2.0 * cross.imag(); break;
            }
            v += t.weight * s;
          }
        }
        return v;
      },
      form);
}

Estimate summarize(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mean = sum / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  Estimate e;
  e.mean = mean;
  e.variance = m2 * n / (n - 1.0);
  e.standard_error = std::sqrt(e.variance / n);
  e.variance_standard_error = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
  return e;
}

}  // namespace

bool Estimate::variance_matches(double expected, double k, double extra) const {
  return std::abs(variance - expected) <= k * variance_standard_error + extra;
}

SampleRun estimate_variances(const Network& network, const std::vector<Request>& requests,
                             std::uint64_t seed, std::size_t n_samples) {
  require(n_samples >= kMinSamples, "n_samples must be >= 1000");
  const std::size_t n = network.input.mode_count();
  require(n > 0 && network.input.means.size() == n, "input state has no modes");
  for (const auto& s : network.steps) check_step(s, n);
  std::set<std::string> names;
  for (const auto& r : requests) {
    require(names.insert(r.name).second, "duplicate request name");
    check_request(r, n);
  }

  const Eigen::LLT<Eigen::MatrixXd> llt(network.input.cov.matrix());
  require(llt.info() == Eigen::Success, "input covariance is not positive definite");
  const Eigen::MatrixXd chol = llt.matrixL();

  // Mean trajectory, propagated with the same per-sample maps and no noise.
  std::vector<std::vector<Complex>> means(network.steps.size() + 1);
  for (std::size_t j = 0; j < n; ++j) means[0].push_back(network.input.means[j].amplitude);
  for (std::size_t k = 0; k < network.steps.size(); ++k) {
    means[k + 1] = means[k];
    apply(network.steps[k], means[k + 1], means[k], nullptr);
  }
  const std::vector<Complex>& out_mean = means.back();

  std::vector<std::vector<double>> values(requests.size(), std::vector<double>(n_samples));
  const std::size_t chunks = (n_samples + kChunkSize - 1) / kChunkSize;
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::min<std::size_t>(chunks, 16));

  const auto run_chunk = [&](std::size_t c) {
    NormalSource rng(splitmix64(seed ^ splitmix64(c)));
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(n_samples, begin + kChunkSize);
    Eigen::VectorXd z(2 * n);
    std::vector<Complex> a(n);
    for (std::size_t i = begin; i < end; ++i) {
      for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = rng.next();
      const Eigen::VectorXd dq = chol * z;
      for (std::size_t j = 0; j < n; ++j) {
        a[j] = means[0][j] + 0.5 * Complex(dq(2 * j), dq(2 * j + 1));
      }
      for (std::size_t k = 0; k < network.steps.size(); ++k) apply(network.steps[k], a, means[k], &rng);
      for (std::size_t r = 0; r < requests.size(); ++r) values[r][i] = evaluate(requests[r].form, a, out_mean);
    }
  };

  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
    }));
  }
  for (auto& j : jobs) j.get();

  SampleRun run;
  run.seed = seed;
  run.n_samples = n_samples;
  for (std::size_t r = 0; r < requests.size(); ++r) run.estimates[requests[r].name] = summarize(values[r]);
  return run;
}

}  // namespace cvent::mc
