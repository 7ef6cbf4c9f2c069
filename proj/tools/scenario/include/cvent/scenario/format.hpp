#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace cvent::scenario {

/// 9 significant digits, '.' separator regardless of locale. Empty for NaN/inf.
std::string format_number(double value);
std::string format_number(const std::optional<double>& value);

/// Fixed-decimal variant for human-readable reports.
std::string format_fixed(double value, int decimals);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace cvent::scenario
