#include "cvent/scenario/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>

#include "cvent/detection.hpp"
#include "cvent/entanglement.hpp"
#include "cvent/interferometry.hpp"
#include "cvent/mc_oracle.hpp"
#include "cvent/polarization.hpp"
#include "cvent/scenario/format.hpp"

namespace cvent::scenario {

namespace {

constexpr double kOracleSigmas = 3.0;
constexpr double kStokesLinearizationPhotons = 1e4;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Hermitian matrices of a^dag M a for S1, S2, S3 on the (x, y) pair.
Eigen::Matrix2cd stokes_matrix(int component) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (component) {
    case 1: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    case 2: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 3: m(0, 1) = -i; m(1, 0) = i; break;
    default: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
  }
  return m;
}

// Variance of the second-order part da^dag M da of a quadratic observable.
// Sampled fluctuations are Gaussian, so it adds to the linearized variance
// with no cross term.
double quadratic_variance(const GaussianState& state, const Eigen::MatrixXcd& m) {
  const auto n = static_cast<Eigen::Index>(state.mode_count());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) w.block<2, 2>(2 * j, 2 * k) = complex_coefficient_block(m(j, k));
  }
  const Eigen::MatrixXd ws = w * state.cov.matrix();
  return (ws * ws).trace() / 8.0;
}

Eigen::MatrixXcd intensity_matrix(std::size_t modes, const std::vector<std::pair<std::size_t, double>>& weights) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(modes), static_cast<Eigen::Index>(modes));
  for (const auto& [mode, w] : weights) m(static_cast<Eigen::Index>(mode), static_cast<Eigen::Index>(mode)) += w;
  return m;
}

// One oracle comparison: the estimate minus the known second-order term
// against the analytic (linearized) variance.
struct Check {
  double oracle = kNaN;  ///< estimated linearized variance
  double standard_error = kNaN;
  bool pass = true;
};

Check compare(const mc::Estimate& e, double analytic, double second_order = 0.0) {
  Check c;
  c.oracle = e.variance - second_order;
  c.standard_error = e.variance_standard_error;
  c.pass = e.variance_matches(analytic + second_order, kOracleSigmas);
  return c;
}

std::string verdict(bool pass) { return pass ? "pass" : "FAIL"; }

class Runner {
 public:
  Runner(const ScenarioConfig& config, const RunOptions& options)
      : cfg_(config),
        opt_(options),
        verify_(options.verify || config.oracle.enabled),
        seed_(options.seed.value_or(config.oracle.seed)),
        samples_(options.samples.value_or(config.oracle.samples)),
        dir_(options.output_directory.value_or(config.output_directory)) {}

  RunResult run() {
    std::filesystem::create_directories(dir_);
    RunResult result;
    for (const auto& a : cfg_.analyses) {
      AnalysisOutcome out;
      out.name = a.name;
      out.kind = a.kind;
      checks_ = failures_ = 0;
      switch (a.kind) {
        case AnalysisKind::criterion: out.file = criterion(a); break;
        case AnalysisKind::polarization_criterion: out.file = polarization(a); break;
        case AnalysisKind::theta_scan: out.file = theta_scan(a); break;
        case AnalysisKind::sensitivity: out.file = sensitivity(a); break;
        case AnalysisKind::dense_coding: out.file = dense(a); break;
      }
      out.oracle_checks = checks_;
      out.oracle_failures = failures_;
      result.oracle_checks += checks_;
      result.oracle_failures += failures_;
      log() << "wrote " << out.file.string();
      if (verify_) log() << " (oracle " << checks_ - failures_ << "/" << checks_ << " within 3 s.e.)";
      log() << '\n';
      result.analyses.push_back(std::move(out));
    }
    return result;
  }

 private:
  std::ostream& log() {
    static std::ofstream null;
    return opt_.log ? *opt_.log : null;
  }

  mc::SampleRun sample(const Network& net, const std::vector<mc::Request>& requests) {
    return mc::estimate_variances(net, requests, seed_ + calls_++, samples_);
  }

  void record(const Check& c) {
    ++checks_;
    if (!c.pass) ++failures_;
  }

  Network prefix(const Network& net, const std::optional<std::size_t>& after) const {
    Network p = net;
    if (after) p.steps.resize(*after);
    return p;
  }

  std::vector<std::string> labels(const AnalysisSpec& a) const { return a.labels.empty() ? a.modes : a.labels; }

  Bindings at(const AnalysisSpec& a, double value) const { return {{a.parameter, value}}; }

  NetworkFamily family(const ScenarioConfig& cfg, const AnalysisSpec& a) const {
    return [&cfg, &a, this](double v) { return build_network(cfg, at(a, v)); };
  }

  std::vector<double> operating_points(const AnalysisSpec& a) const {
    const Bindings b = evaluate_parameters(cfg_);
    std::vector<double> v;
    for (const auto& t : a.at) v.push_back(evaluate_expression(t, b));
    return v;
  }

  std::filesystem::path report_path(const AnalysisSpec& a) const { return dir_ / (a.name + ".txt"); }
  std::filesystem::path csv_path(const AnalysisSpec& a) const { return dir_ / (a.name + ".csv"); }

  static void criterion_lines(std::ostream& os, const EntanglementReport& r) {
    os << "gain = " << format_number(r.gain) << '\n';
    os << "v_sq_x = " << format_number(r.v_sq_x) << '\n';
    os << "v_sq_y = " << format_number(r.v_sq_y) << '\n';
    os << "sign_convention = "
       << (r.sign_convention == AmplitudeCorrelation::anticorrelated ? "anticorrelated" : "correlated") << '\n';
    os << "criterion_sum = " << format_fixed(r.criterion_sum, 4)
       << (r.nonseparable ? " < 2 → non-separable" : " >= 2 → separable") << '\n';
  }

  void oracle_line(std::ostream& os, const std::string& what, const Check& c, double reference) {
    os << "oracle_" << what << " = " << format_number(c.oracle / reference)
       << " se = " << format_number(c.standard_error / reference) << ' ' << verdict(c.pass) << '\n';
  }

  std::filesystem::path criterion(const AnalysisSpec& a) {
    const Network net = prefix(build_network(cfg_), a.after);
    const GaussianState state = propagate(net);
    const std::size_t m1 = cfg_.mode_index(a.modes[0]);
    const std::size_t m2 = cfg_.mode_index(a.modes[1]);
    const EntanglementReport r = a.gain == "optimize"
                                     ? duan_criterion_optimized(state, m1, m2)
                                     : duan_criterion(state, m1, m2, evaluate_expression(a.gain, evaluate_parameters(cfg_)));
    std::ofstream os(report_path(a));
    os << "analysis = " << a.name << '\n' << "type = criterion\n";
    os << "modes = " << a.modes[0] << ", " << a.modes[1] << '\n';
    criterion_lines(os, r);
    if (verify_) {
      const bool anti = r.sign_convention == AmplitudeCorrelation::anticorrelated;
      const Sign sx = anti ? Sign::plus : Sign::minus;
      const Sign sy = anti ? Sign::minus : Sign::plus;
      const Eigen::VectorXd cx = squeezing_coefficients(state, m1, m2, Quadrature::X, sx, r.gain);
      const Eigen::VectorXd cy = squeezing_coefficients(state, m1, m2, Quadrature::Y, sy, r.gain);
      const double ref = shot_noise_reference(state, m1, m2, r.gain);
      const auto run = sample(net, {{"x", mc::Linear{cx}}, {"y", mc::Linear{cy}}});
      const Check x = compare(run.at("x"), r.v_sq_x * ref);
      const Check y = compare(run.at("y"), r.v_sq_y * ref);
      record(x);
      record(y);
      oracle_metadata(os, run);
      oracle_line(os, "v_sq_x", x, ref);
      oracle_line(os, "v_sq_y", y, ref);
    }
    return report_path(a);
  }

  std::filesystem::path polarization(const AnalysisSpec& a) {
    const Network net = prefix(build_network(cfg_), a.after);
    const GaussianState state = propagate(net);
    const PolarizedBeam ba{cfg_.mode_index(a.beams[0].first), cfg_.mode_index(a.beams[0].second)};
    const PolarizedBeam bb{cfg_.mode_index(a.beams[1].first), cfg_.mode_index(a.beams[1].second)};
    for (std::size_t m : {ba.mode_x, ba.mode_y, bb.mode_x, bb.mode_y}) {
      if (state.means[m].photon_number() < kStokesLinearizationPhotons) {
        log() << "warning: " << a.name << ": mode '" << cfg_.sources[m].label << "' has |alpha|^2 = "
              << format_number(state.means[m].photon_number())
              << " < 1e4; linearized Stokes variances may be biased\n";
      }
    }
    double g = 1.0;
    if (a.gain == "optimize") {
      g = minimize_gain([&](double x) { return polarization_nonseparability(state, ba, bb, x).criterion_sum; }).gain;
    } else {
      g = evaluate_expression(a.gain, evaluate_parameters(cfg_));
    }
    const EntanglementReport r = polarization_nonseparability(state, ba, bb, g);
    std::ofstream os(report_path(a));
    os << "analysis = " << a.name << '\n' << "type = polarization_criterion\n";
    os << "beam_a = " << a.beams[0].first << ", " << a.beams[0].second << '\n';
    os << "beam_b = " << a.beams[1].first << ", " << a.beams[1].second << '\n';
    criterion_lines(os, r);
    if (verify_) {
      const GaussianState reference = coherent_reference(state);
      std::vector<mc::Request> req;
      std::vector<double> analytic;
      std::vector<double> refs;
      std::vector<double> second;
      for (auto [component, sign, v] : {std::tuple{1, Sign::plus, r.v_sq_x}, std::tuple{3, Sign::minus, r.v_sq_y}}) {
        const double w = sign == Sign::plus ? g : -g;
        const Eigen::VectorXd c = stokes_combination(state, ba, bb, component, sign, g);
        const double ref = joint_variance(reference, c);
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(state.mode_count()),
                                                    static_cast<Eigen::Index>(state.mode_count()));
        const Eigen::Matrix2cd s = stokes_matrix(component);
        for (auto [beam, weight] : {std::pair{ba, 1.0}, std::pair{bb, w}}) {
          const std::size_t idx[2] = {beam.mode_x, beam.mode_y};
          for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) m(static_cast<Eigen::Index>(idx[j]), static_cast<Eigen::Index>(idx[k])) += weight * s(j, k);
          }
        }
        req.push_back({"S" + std::to_string(component),
                       mc::Stokes{{{ba.mode_x, ba.mode_y, component, 1.0}, {bb.mode_x, bb.mode_y, component, w}}}});
        analytic.push_back(v * ref);
        refs.push_back(ref);
        second.push_back(quadratic_variance(state, m));
      }
      const auto run = sample(net, req);
      oracle_metadata(os, run);
      const char* names[2] = {"v_sq_x", "v_sq_y"};
      for (std::size_t k = 0; k < 2; ++k) {
        const Check c = compare(run.at(req[k].name), analytic[k], second[k]);
        record(c);
        oracle_line(os, names[k], c, refs[k]);
      }
    }
    return report_path(a);
  }

  static void oracle_metadata(std::ostream& os, const mc::SampleRun& run) {
    os << "oracle_generator = " << run.generator << '\n';
    os << "oracle_transform = " << run.transform << '\n';
    os << "oracle_samples = " << run.n_samples << '\n';
  }

  std::vector<double> scan_grid(const AnalysisSpec& a) const {
    const Bindings b = evaluate_parameters(cfg_);
    if (!a.grid.values.empty()) {
      std::vector<double> v;
      for (const auto& t : a.grid.values) v.push_back(evaluate_expression(t, b));
      return v;
    }
    return linear_grid(evaluate_expression(a.grid.from, b), evaluate_expression(a.grid.to, b), a.grid.points);
  }

  std::set<std::size_t> spot_indices(std::size_t n) const {
    std::set<std::size_t> s;
    const std::size_t k = std::min(cfg_.oracle.spot_points, n);
    if (k == 1) s.insert(n / 2);
    for (std::size_t i = 0; k > 1 && i < k; ++i) {
      s.insert(static_cast<std::size_t>(std::llround(static_cast<double>(i) * static_cast<double>(n - 1) / static_cast<double>(k - 1))));
    }
    return s;
  }

  // Exact single-arm photon-number variance from the oracle.
  Check intensity_check(const Network& net, const GaussianState& out, std::size_t mode, double analytic) {
    const std::vector<std::pair<std::size_t, double>> w{{mode, 1.0}};
    const auto run = sample(net, {{"n", mc::Intensity{w}}});
    const Check c = compare(run.at("n"), analytic, quadratic_variance(out, intensity_matrix(out.mode_count(), w)));
    record(c);
    return c;
  }

  std::filesystem::path theta_scan(const AnalysisSpec& a) {
    const std::vector<double> grid = scan_grid(a);
    const auto fam = family(cfg_, a);
    const auto names = labels(a);
    std::vector<std::vector<DetectionRecord>> arms;
    for (const auto& m : a.modes) arms.push_back(scan_theta(fam, grid, cfg_.mode_index(m)));
    const std::set<std::size_t> spots = verify_ ? spot_indices(grid.size()) : std::set<std::size_t>{};

    CsvWriter csv(csv_path(a), csv_columns(AnalysisKind::theta_scan, verify_));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::optional<Network> net;
      std::optional<GaussianState> out;
      for (std::size_t k = 0; k < arms.size(); ++k) {
        const DetectionRecord& r = arms[k][i];
        std::vector<std::string> row{format_number(grid[i]),
                                     names[k],
                                     format_number(r.mean_intensity),
                                     format_number(r.shot_noise),
                                     format_number(r.amplitude_noise),
                                     format_number(r.normalized_variance),
                                     r.dark ? "dark" : ""};
        if (verify_) {
          if (spots.count(i) && !r.dark) {
            if (!net) {
              net = fam(grid[i]);
              out = propagate(*net);
            }
            const Check c = intensity_check(*net, *out, cfg_.mode_index(a.modes[k]), r.amplitude_noise);
            row.push_back(format_number(c.oracle / r.shot_noise));
            row.push_back(format_number(c.standard_error / r.shot_noise));
            row.push_back(verdict(c.pass));
          } else {
            row.insert(row.end(), 3, "");
          }
        }
        csv.row(row);
      }
    }
    return csv_path(a);
  }

  std::filesystem::path sensitivity(const AnalysisSpec& a) {
    const std::size_t mode = cfg_.mode_index(a.modes[0]);
    const auto fam = family(cfg_, a);
    const ScenarioConfig coherent = coherent_variant(cfg_);
    const auto coherent_fam = family(coherent, a);

    CsvWriter csv(csv_path(a), csv_columns(AnalysisKind::sensitivity, verify_));
    for (double theta : operating_points(a)) {
      SensitivityReport r = min_resolvable_phase(fam, theta, mode);
      if (a.coherent_reference) {
        r.coherent_delta_theta = min_resolvable_phase(coherent_fam, theta, mode).delta_theta_min;
        r.gain_over_coherent = r.coherent_delta_theta / r.delta_theta_min;
      }
      std::vector<std::string> row;
      for (double v : {r.theta_operating, r.n, r.normalized_variance, r.snr, r.delta_theta_min,
                       r.delta_theta_linear, r.closed_form_full_contrast, r.closed_form_reduced_contrast, r.sql,
                       r.improvement_factor, r.coherent_delta_theta, r.gain_over_coherent}) {
        row.push_back(format_number(v));
      }
      if (verify_) {
        const Network net = fam(theta);
        const Check c = intensity_check(net, propagate(net), mode, r.n * r.normalized_variance);
        row.push_back(format_number(c.oracle / r.n));
        row.push_back(format_number(c.standard_error / r.n));
        row.push_back(verdict(c.pass));
      }
      csv.row(row);
    }
    return csv_path(a);
  }

  std::filesystem::path dense(const AnalysisSpec& a) {
    const std::size_t m1 = cfg_.mode_index(a.modes[0]);
    const std::size_t m2 = cfg_.mode_index(a.modes[1]);
    const Bindings b = evaluate_parameters(cfg_);
    const ModulationSignal mod{evaluate_expression(a.v_x_mod, b), evaluate_expression(a.v_y_mod, b)};

    CsvWriter csv(csv_path(a), csv_columns(AnalysisKind::dense_coding, verify_));
    for (double theta : operating_points(a)) {
      const Network base = build_network(cfg_, at(a, theta));
      const DenseCodingReport r = dense_coding_readout(base, *a.after, m1, m2, mod, theta, a.strict);
      const double q = r.alpha_sq;
      std::vector<std::string> row;
      for (double v : {r.theta, r.alpha_sq, r.v_plus / q, r.v_minus / q, r.v_sq, r.v_sq_minus, r.v_plus_closed / q,
                       r.v_minus_closed / q, r.coherent_bound_plus / q, r.coherent_bound_minus / q, r.snr_gain_x,
                       r.snr_gain_y}) {
        row.push_back(format_number(v));
      }
      if (verify_) {
        const Network net = dense_coding_network(base, *a.after, m1, mod);
        const GaussianState out = propagate(net);
        const double n_total = out.means[m1].photon_number() + out.means[m2].photon_number();
        const std::vector<std::pair<std::size_t, double>> wp{{m1, 1.0}, {m2, 1.0}};
        const std::vector<std::pair<std::size_t, double>> wm{{m1, 1.0}, {m2, -1.0}};
        const auto run = sample(net, {{"plus", mc::Intensity{wp}}, {"minus", mc::Intensity{wm}}});
        // v_plus is reported per alpha^2 = n_total / 2 of shot noise
        const double to_report = q / n_total;
        const Check p = compare(run.at("plus"), r.v_plus / to_report,
                                quadratic_variance(out, intensity_matrix(out.mode_count(), wp)));
        const Check m = compare(run.at("minus"), r.v_minus / to_report,
                                quadratic_variance(out, intensity_matrix(out.mode_count(), wm)));
        record(p);
        record(m);
        const double unit = n_total;
        row.push_back(format_number(p.oracle / unit));
        row.push_back(format_number(m.oracle / unit));
        row.push_back(format_number(p.standard_error / unit));
        row.push_back(format_number(m.standard_error / unit));
        row.push_back(verdict(p.pass && m.pass));
      }
      csv.row(row);
    }
    return csv_path(a);
  }

  const ScenarioConfig& cfg_;
  RunOptions opt_;
  bool verify_;
  std::uint64_t seed_;
  std::size_t samples_;
  std::filesystem::path dir_;
  std::uint64_t calls_ = 0;
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
};

}  // namespace

std::vector<std::string> csv_columns(AnalysisKind kind, bool verify) {
  std::vector<std::string> c;
  std::vector<std::string> oracle;
  switch (kind) {
    case AnalysisKind::theta_scan:
      c = {"theta", "arm", "mean_intensity", "shot_noise", "amplitude_noise", "normalized_variance", "flags"};
      oracle = {"oracle_normalized_variance", "oracle_standard_error", "oracle_pass"};
      break;
    case AnalysisKind::sensitivity:
      c = {"theta", "n", "normalized_variance", "snr", "delta_theta_min", "delta_theta_linear",
           "closed_form_full_contrast", "closed_form_reduced_contrast", "sql", "improvement_factor",
           "coherent_delta_theta", "gain_over_coherent"};
      oracle = {"oracle_normalized_variance", "oracle_standard_error", "oracle_pass"};
      break;
    case AnalysisKind::dense_coding:
      c = {"theta", "alpha_sq", "v_plus", "v_minus", "v_sq", "v_sq_minus", "v_plus_closed", "v_minus_closed",
           "coherent_bound_plus", "coherent_bound_minus", "snr_gain_x", "snr_gain_y"};
      oracle = {"oracle_v_plus", "oracle_v_minus", "oracle_standard_error_plus", "oracle_standard_error_minus",
                "oracle_pass"};
      break;
    case AnalysisKind::criterion:
    case AnalysisKind::polarization_criterion:
      return {};
  }
  if (verify) c.insert(c.end(), oracle.begin(), oracle.end());
  return c;
}

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  return Runner(config, options).run();
}

}  // namespace cvent::scenario
