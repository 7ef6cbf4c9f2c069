#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cvent/scenario/config.hpp"

namespace cvent::scenario {

struct RunOptions {
  bool verify = false;  ///< run the Monte-Carlo oracle even if the config leaves it disabled
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::filesystem::path> output_directory;
  std::ostream* log = nullptr;  ///< progress and warnings; silent when null
};

struct AnalysisOutcome {
  std::string name;
  AnalysisKind kind = AnalysisKind::criterion;
  std::filesystem::path file;
  std::size_t oracle_checks = 0;
  std::size_t oracle_failures = 0;
};

struct RunResult {
  std::vector<AnalysisOutcome> analyses;
  std::size_t oracle_checks = 0;
  std::size_t oracle_failures = 0;
};

/// Column names written for each CSV-producing analysis, in order. Oracle
/// columns are appended when verification is on.
std::vector<std::string> csv_columns(AnalysisKind kind, bool verify);

/// Executes every analysis and writes `<name>.csv` (scans) or `<name>.txt`
/// (criterion reports) into the output directory.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace cvent::scenario
