#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cvent/scenario/config.hpp"
#include "cvent/scenario/format.hpp"
#include "cvent/scenario/runner.hpp"
#include "csv.hpp"

namespace fs = std::filesystem;
using namespace cvent::scenario;

namespace {

const double kVs = std::pow(10.0, -0.4);

const char* kMinimal = R"(
parameters:
  alpha: 1e3
sources:
  - {label: a, amplitude: alpha, squeeze_db: 4}
  - {label: b, amplitude: alpha, squeeze_db: 4}
network:
  - beam_splitter: {modes: [a, b], phase: pi/2}
analyses:
  - {type: criterion, name: c, modes: [a, b]}
)";

ConfigError parse_error(const std::string& text) {
  try {
    parse_config(text, "t.yaml");
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("", 0, 0, "", "");
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("expressions") {
  TEST_CASE("arithmetic") {
    CHECK(evaluate_expression("pi/2") == doctest::Approx(M_PI / 2));
    CHECK(evaluate_expression("3*pi/4") == doctest::Approx(3 * M_PI / 4));
    CHECK(evaluate_expression("-theta + 0.1", {{"theta", 1.0}}) == doctest::Approx(-0.9));
    CHECK(evaluate_expression("2*(1+2)") == 6.0);
    CHECK(evaluate_expression("1e3") == 1000.0);
    CHECK(evaluate_expression(" - -2 ") == 2.0);
  }

  TEST_CASE("errors") {
    for (const char* bad : {"", "1+", "2**3", "(1", "x", "1/0", "1 2", "1e999"}) {
      CHECK_THROWS_AS(evaluate_expression(bad), ExpressionError);
    }
  }
}

TEST_SUITE("config") {
  TEST_CASE("bundled scenarios parse and round-trip") {
    int seen = 0;
    for (const auto& e : fs::directory_iterator(CVENT_SCENARIO_DIR)) {
      if (e.path().extension() != ".yaml") continue;
      CAPTURE(e.path());
      const ScenarioConfig a = load_config(e.path().string());
      const std::string text = to_yaml(a);
      const ScenarioConfig b = parse_config(text);
      CHECK(a == b);
      CHECK(to_yaml(b) == text);
      CHECK_NOTHROW(build_network(a));
      ++seen;
    }
    CHECK(seen == 7);
  }

  TEST_CASE("defaults and expressions are kept as written") {
    const auto c = parse_config(kMinimal);
    REQUIRE(c.sources.size() == 2);
    CHECK(c.sources[0].amplitude_re == "alpha");
    CHECK(c.network[0].phase == "pi/2");
    CHECK(c.network[0].transmittance == "0.5");
    CHECK(c.analyses[0].gain == "1");
    CHECK(!c.oracle.enabled);
    const auto net = build_network(c);
    CHECK(net.input.means[1].amplitude.real() == 1e3);
    CHECK(std::get<cvent::BeamSplitter>(net.steps[0]).phase == doctest::Approx(M_PI / 2));
  }

  TEST_CASE("parameter overrides propagate to later parameters") {
    const auto c = parse_config(replace(kMinimal, "alpha: 1e3", "alpha: 1e3\n  beta: 2*alpha"));
    const auto b = evaluate_parameters(c, {{"alpha", 5.0}});
    CHECK(b.at("beta") == 10.0);
  }

  TEST_CASE("missing sources") {
    const auto e = parse_error(replace(kMinimal, "sources:", "sauces:"));
    CHECK(e.line() > 0);
    CHECK(std::string(e.what()).find("t.yaml:") == 0);
    // the unknown key is reported first, at its own line
    CHECK(e.field() == "sauces");
    CHECK(e.line() == 4);
    const auto m = parse_error(R"(
analyses:
  - {type: criterion, modes: [a, b]}
)");
    CHECK(m.field() == "sources");
    CHECK(std::string(m.what()).find("missing required field") != std::string::npos);
  }

  TEST_CASE("undeclared mode") {
    const auto e = parse_error(replace(kMinimal, "modes: [a, b], phase", "modes: [a, z], phase"));
    CHECK(e.field() == "network[0].beam_splitter.modes[1]");
    CHECK(e.line() == 8);
    CHECK(std::string(e.what()).find("'z'") != std::string::npos);
  }

  TEST_CASE("physics validation") {
    CHECK(parse_error(replace(kMinimal, "squeeze_db: 4}", "squeeze_db: 4, excess_factor: 0.5}")).field() ==
          "sources[0].excess_factor");
    CHECK(parse_error(replace(kMinimal, "squeeze_db: 4}", "squeeze_db: -1}")).field() == "sources[0].squeeze_db");
    CHECK(parse_error(replace(kMinimal, "phase: pi/2", "transmittance: 1.5")).field() ==
          "network[0].beam_splitter.transmittance");
  }

  TEST_CASE("structural validation") {
    CHECK(parse_error(replace(kMinimal, "label: b", "label: a")).field() == "sources[1].label");
    CHECK(parse_error(replace(kMinimal, "amplitude: alpha,", "amplitude: gamma,")).field() ==
          "sources[0].amplitude");
    CHECK(parse_error(replace(kMinimal, "beam_splitter:", "mirror:")).field() == "network[0]");
    CHECK(parse_error(replace(kMinimal, "modes: [a, b]}", "modes: [a, b], after: 2}")).field() ==
          "analyses[0].after");
    CHECK(parse_error(replace(kMinimal, "type: criterion", "type: tomography")).field() == "analyses[0].type");
    CHECK(parse_error(replace(kMinimal, "modes: [a, b]}", "modes: [a, b], colour: red}")).field() ==
          "analyses[0].colour");
    CHECK(parse_error("sources: [\n").line() > 0);
  }

  TEST_CASE("scan grids") {
    const std::string scan = std::string(kMinimal) + "  - {type: theta_scan, name: s, grid: GRID, arms: [a]}\n";
    const auto with_theta = replace(scan, "alpha: 1e3", "alpha: 1e3\n  theta: 0");
    CHECK_NOTHROW(parse_config(replace(with_theta, "GRID", "{from: 0, to: pi, points: 5}")));
    CHECK_NOTHROW(parse_config(replace(with_theta, "GRID", "{values: [3, 2, 1]}")));
    CHECK(parse_error(replace(with_theta, "GRID", "{values: [0, 2, 1]}")).field() == "analyses[1].grid.values");
    CHECK(parse_error(replace(with_theta, "GRID", "{from: 1, to: 1, points: 3}")).field() == "analyses[1].grid");
    CHECK(parse_error(replace(with_theta, "GRID", "{from: 0, to: 1/0, points: 3}")).field() ==
          "analyses[1].grid.to");
    // the scanned parameter has to exist
    CHECK(parse_error(replace(scan, "GRID", "{from: 0, to: pi, points: 5}")).field() == "analyses[1].parameter");
  }
}

TEST_SUITE("csv") {
  TEST_CASE("number formatting") {
    CHECK(format_number(std::pow(10.0, -0.4)) == "0.398107171");
    CHECK(format_number(1e6) == "1000000");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(2.5e-12) == "2.5e-12");
    CHECK(format_number(std::nan("")).empty());
    CHECK(format_number(std::optional<double>{}).empty());
    CHECK(format_fixed(0.796214, 4) == "0.7962");
  }

  TEST_CASE("schemas are stable") {
    CHECK(csv_columns(AnalysisKind::theta_scan, false) ==
          std::vector<std::string>{"theta", "arm", "mean_intensity", "shot_noise", "amplitude_noise",
                                   "normalized_variance", "flags"});
    CHECK(csv_columns(AnalysisKind::theta_scan, true).back() == "oracle_pass");
    CHECK(csv_columns(AnalysisKind::sensitivity, false).size() == 12);
    CHECK(csv_columns(AnalysisKind::dense_coding, true).size() == 17);
    CHECK(csv_columns(AnalysisKind::criterion, true).empty());
  }
}

TEST_SUITE("runner") {
  TEST_CASE("duan report") {
    const fs::path dir = fs::temp_directory_path() / "cvent_test_duan";
    fs::remove_all(dir);
    RunOptions opt;
    opt.output_directory = dir;
    const auto r = run_scenario(load_config(std::string(CVENT_SCENARIO_DIR) + "/duan.yaml"), opt);
    CHECK(r.oracle_checks == 0);
    const std::string text = slurp(dir / "duan.txt");
    CHECK(text.find("criterion_sum = 0.7962 < 2 → non-separable\n") != std::string::npos);
  }

  TEST_CASE("coherent inputs are reported separable") {
    const fs::path dir = fs::temp_directory_path() / "cvent_test_coherent";
    fs::remove_all(dir);
    RunOptions opt;
    opt.output_directory = dir;
    run_scenario(coherent_variant(parse_config(kMinimal)), opt);
    CHECK(slurp(dir / "c.txt").find("criterion_sum = 2.0000 >= 2 → separable\n") != std::string::npos);
  }

  TEST_CASE("fig4c scan is flat at the input squeezing") {
    const fs::path dir = fs::temp_directory_path() / "cvent_test_fig4c";
    fs::remove_all(dir);
    RunOptions opt;
    opt.output_directory = dir;
    run_scenario(load_config(std::string(CVENT_SCENARIO_DIR) + "/fig4c.yaml"), opt);
    const auto table = testcsv::read(dir / "fig4c.csv");
    CHECK(table.header == csv_columns(AnalysisKind::theta_scan, false));
    REQUIRE(table.rows.size() == 181);
    for (const auto& row : table.rows) {
      CHECK(row.at(5) == "0.398107171");
      CHECK(std::abs(std::stod(row.at(5)) - kVs) < 1e-9);
    }
  }

  TEST_CASE("verification appends oracle columns") {
    const fs::path dir = fs::temp_directory_path() / "cvent_test_dense";
    fs::remove_all(dir);
    RunOptions opt;
    opt.output_directory = dir;
    opt.verify = true;
    opt.samples = 20'000;
    const auto r = run_scenario(load_config(std::string(CVENT_SCENARIO_DIR) + "/dense.yaml"), opt);
    CHECK(r.oracle_checks == 8);
    const auto table = testcsv::read(dir / "dense.csv");
    CHECK(table.header == csv_columns(AnalysisKind::dense_coding, true));
    REQUIRE(table.rows.size() == 4);
    for (const auto& row : table.rows) {
      CHECK(std::stod(row.at(2)) == doctest::Approx(1.0 + kVs).epsilon(1e-9));
      CHECK(std::abs(std::stod(row.at(12)) - std::stod(row.at(2))) < 5.0 * std::stod(row.at(14)));
    }
  }
}
