#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cvent/gaussian.hpp"
#include "cvent/scenario/config.hpp"
#include "cvent/scenario/runner.hpp"

namespace fs = std::filesystem;
namespace sc = cvent::scenario;

namespace {

enum Exit : int { ok = 0, io_error = 1, invalid = 2, oracle_mismatch = 3 };

// Source tree first, then the installed share directory next to the binary.
std::vector<fs::path> scenario_dirs() {
  std::vector<fs::path> dirs{CVENT_SCENARIO_DIR};
  std::error_code ec;
  const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) dirs.push_back(exe.parent_path().parent_path() / "share" / "cvent" / "scenarios");
  return dirs;
}

fs::path resolve(const std::string& arg) {
  if (fs::exists(arg) || arg.find('/') != std::string::npos) return arg;
  for (const auto& dir : scenario_dirs()) {
    const fs::path bundled = dir / (arg + ".yaml");
    if (fs::exists(bundled)) return bundled;
  }
  return arg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cvent: continuous-variable entanglement scenario runner"};
  app.require_subcommand(1);

  std::string config;
  bool verify = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> out;
  std::string format = "csv";

  auto* run = app.add_subcommand("run", "Run a scenario file or a bundled scenario by name");
  run->add_option("config", config, "Scenario YAML path or bundled name (fig4a, fig4b, fig4c, duan, stokes, "
                                    "sensitivity, dense)")
      ->required();
  run->add_flag("--verify", verify, "Check analytic variances against the Monte-Carlo oracle");
  run->add_option("--seed", seed, "Oracle seed (overrides the scenario)");
  run->add_option("--samples", samples, "Oracle samples per check (>= 1000)")->check(CLI::Range(1000ul, 1'000'000'000ul));
  run->add_option("--out", out, "Output directory (overrides the scenario)");
  run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));

  auto* list = app.add_subcommand("list", "List bundled scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::invalid;
  }

  if (list->parsed()) {
    for (const auto& dir : scenario_dirs()) {
      if (!fs::is_directory(dir)) continue;
      std::vector<std::string> names;
      for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".yaml") names.push_back(entry.path().stem().string());
      }
      std::sort(names.begin(), names.end());
      for (const auto& n : names) std::cout << n << '\n';
      return Exit::ok;
    }
    std::cerr << "error: no scenario directory found\n";
    return Exit::io_error;
  }

  try {
    const sc::ScenarioConfig cfg = sc::load_config(resolve(config).string());
    sc::RunOptions opts;
    opts.verify = verify;
    opts.seed = seed;
    opts.samples = samples;
    if (out) opts.output_directory = *out;
    opts.log = &std::cerr;
    const sc::RunResult result = sc::run_scenario(cfg, opts);
    if (result.oracle_failures > 0) {
      std::cerr << "error: " << result.oracle_failures << " of " << result.oracle_checks
                << " oracle checks outside 3 standard errors\n";
      return Exit::oracle_mismatch;
    }
    return Exit::ok;
  } catch (const sc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::invalid;
  } catch (const sc::ExpressionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::invalid;
  } catch (const std::invalid_argument& e) {  // includes PhysicsError
    std::cerr << "error: " << e.what() << '\n';
    return Exit::invalid;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::io_error;
  }
}
