/**
 * @file config.hpp
 * @brief Scenario files: sources, a linear-optical network and analyses.
 *
 * Scenarios are YAML documents. Every numeric field is kept as the expression
 * text it was written with ("pi/2", "theta", "1e3"), so that serializing a
 * parsed config reproduces it exactly; values are evaluated against the
 * `parameters` section when the scenario runs.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cvent/interferometry.hpp"
#include "cvent/network.hpp"
#include "cvent/scenario/expression.hpp"

namespace cvent::scenario {

/// Parse or validation failure with its location. Line and column are
/// 1-based; 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string file, int line, int column, std::string field, const std::string& message);

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& field() const { return field_; }

 private:
  std::string file_;
  int line_;
  int column_;
  std::string field_;
};

struct SourceSpec {
  std::string label;
  std::string amplitude_re = "0";
  std::string amplitude_im = "0";
  bool complex_amplitude = false;  ///< written as [re, im]
  std::string squeeze_db = "0";
  std::string excess_factor = "1";
  std::string polarization;  ///< optional tag, e.g. "x" or "y"
  std::optional<std::string> squeeze_angle;  ///< axis offset from the mean field

  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

enum class StepKind { phase_shift, beam_splitter, polarizing_combiner, modulation };

struct StepSpec {
  StepKind kind = StepKind::phase_shift;
  std::vector<std::string> modes;  ///< source labels: 1 (phase/modulation) or 2
  std::string angle = "0";         ///< phase_shift
  std::string transmittance = "0.5";
  std::string phase = "0";         ///< beam_splitter
  std::string beam;                ///< polarizing_combiner
  std::string amplitude_variance = "0";
  std::string phase_variance = "0";

  friend bool operator==(const StepSpec&, const StepSpec&) = default;
};

enum class AnalysisKind { criterion, polarization_criterion, theta_scan, sensitivity, dense_coding };

struct GridSpec {
  std::string from = "0";
  std::string to = "0";
  std::size_t points = 0;
  std::vector<std::string> values;  ///< explicit grid, used instead of from/to/points

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct AnalysisSpec {
  AnalysisKind kind = AnalysisKind::criterion;
  std::string name;
  std::vector<std::string> modes;   ///< criterion pair, scan arms, sensitivity arm, dense arms
  std::vector<std::string> labels;  ///< output names for `modes` (defaults to the mode refs)
  std::vector<std::pair<std::string, std::string>> beams;  ///< polarization: (x, y) per beam
  std::string gain = "1";            ///< expression or "optimize"
  std::optional<std::size_t> after;  ///< evaluate after this many network steps
  std::string parameter = "theta";   ///< scanned / operating parameter
  GridSpec grid;                     ///< theta_scan
  std::vector<std::string> at;       ///< sensitivity and dense_coding operating points
  std::string v_x_mod = "0";
  std::string v_y_mod = "0";
  bool strict = false;
  bool coherent_reference = true;  ///< sensitivity: also run the all-coherent network

  friend bool operator==(const AnalysisSpec&, const AnalysisSpec&) = default;
};

struct OracleSpec {
  bool enabled = false;
  std::uint64_t seed = 1;
  std::size_t samples = 1'000'000;
  std::size_t spot_points = 8;  ///< theta_scan grid points checked per arm

  friend bool operator==(const OracleSpec&, const OracleSpec&) = default;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, std::string>> parameters;  ///< evaluated in order
  std::vector<SourceSpec> sources;
  std::vector<StepSpec> network;
  std::vector<AnalysisSpec> analyses;
  OracleSpec oracle;
  std::string output_directory = ".";

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

  /// Index of the source with this label; throws std::out_of_range.
  std::size_t mode_index(const std::string& label) const;
};

/// Parses and validates. `file` is used in diagnostics only.
ScenarioConfig parse_config(const std::string& text, const std::string& file = "<string>");
ScenarioConfig load_config(const std::string& path);

std::string to_yaml(const ScenarioConfig& config);

const char* to_string(StepKind kind);
const char* to_string(AnalysisKind kind);

/// Parameter values with `overrides` substituted for the named entries
/// (later parameters see the overridden values).
Bindings evaluate_parameters(const ScenarioConfig& config, const Bindings& overrides = {});

/// Input state and steps with every expression evaluated.
Network build_network(const ScenarioConfig& config, const Bindings& overrides = {});

/// Same network with every source made coherent (0 dB, no excess noise).
ScenarioConfig coherent_variant(const ScenarioConfig& config);

}  // namespace cvent::scenario
