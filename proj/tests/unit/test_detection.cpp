#include "doctest.h"

#include <random>

#include "cvent/detection.hpp"
#include "cvent/interferometry.hpp"
#include "fixtures.hpp"

using namespace cvent;
using fixtures::kPi;
using fixtures::kVa;
using fixtures::kVs;

TEST_SUITE("detect arm") {
  TEST_CASE("shot noise follows the fringe") {
    const double alpha = 1e3;
    const auto epr = fixtures::epr_pair(4.0, 4.0, kPi / 2, alpha);
    const auto half = interfere_for_detection(epr, 0, 1, kPi / 2);
    const auto c = detect_arm(half, 0, kPi / 2);
    CHECK(c.shot_noise == doctest::Approx(alpha * alpha).epsilon(1e-12));
    CHECK(*c.normalized_variance == doctest::Approx(kVs).epsilon(1e-9));

    const auto bright = interfere_for_detection(epr, 0, 1, 0.0);
    const auto rc = detect_arm(bright, 0, 0.0);
    const auto rd = detect_arm(bright, 1, 0.0);
    CHECK(rc.shot_noise == doctest::Approx(2.0 * alpha * alpha).epsilon(1e-12));
    CHECK(rd.dark);
    CHECK_FALSE(rd.normalized_variance.has_value());
    CHECK(rd.mean_intensity < 1e-9);
  }

  TEST_CASE("record invariants") {
    const auto s = fixtures::epr_pair(3.0, 5.0);
    const auto r = detect_arm(interfere_for_detection(s, 0, 1, 0.7), 1, 0.7);
    CHECK(r.shot_noise == doctest::Approx(r.mean_intensity).epsilon(1e-9));
    CHECK(*r.normalized_variance == doctest::Approx(r.amplitude_noise / r.shot_noise).epsilon(1e-12));
    CHECK(r.theta == 0.7);
  }

  TEST_CASE("missing arm") {
    CHECK_THROWS_AS(detect_arm(fixtures::epr_pair(4.0, 4.0), 2), std::out_of_range);
  }
}

TEST_SUITE("normalized variance formula") {
  TEST_CASE("equal variances give a constant") {
    for (double t : {0.3, 1.0, 2.5}) {
      CHECK(normalized_variance_formula(kVs, kVs, t, Sign::plus) == doctest::Approx(kVs).epsilon(1e-12));
      CHECK(normalized_variance_formula(kVs, kVs, t, Sign::minus) == doctest::Approx(kVs).epsilon(1e-12));
    }
  }

  TEST_CASE("quadrature point is the arithmetic mean") {
    CHECK(normalized_variance_formula(0.25, 0.63, kPi / 2, Sign::plus) == doctest::Approx(0.44));
  }

  TEST_CASE("spot value at pi/3") {
    const double expected = 0.5 * (1.5 * 0.25 + (0.75 / 1.5) * 0.63);
    CHECK(expected == doctest::Approx(0.345));
    CHECK(normalized_variance_formula(0.25, 0.63, kPi / 3, Sign::plus) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("dark fringe") {
    CHECK_THROWS_AS(normalized_variance_formula(0.25, 0.63, kPi, Sign::plus), std::domain_error);
    CHECK_THROWS_AS(normalized_variance_formula(0.25, 0.63, 0.0, Sign::minus), std::domain_error);
  }

  TEST_CASE("full propagation matches the closed form") {
    const double vp = 0.25;
    const double vm = 0.63;
    const auto s = fixtures::asymmetric_epr(vp, vm);
    CHECK(squeezing_variance(s, 0, 1, Quadrature::X, Sign::plus, 1.0) == doctest::Approx(vp).epsilon(1e-12));
    CHECK(squeezing_variance(s, 0, 1, Quadrature::Y, Sign::minus, 1.0) == doctest::Approx(vm).epsilon(1e-12));
    for (double t : {kPi / 6, kPi / 3, kPi / 2, 2.0, 2.9, 4.0}) {
      const auto out = interfere_for_detection(s, 0, 1, t);
      const auto c = detect_arm(out, 0, t);
      const auto d = detect_arm(out, 1, t);
      CHECK(std::abs(*c.normalized_variance - normalized_variance_formula(vp, vm, t, Sign::plus)) < 1e-9);
      CHECK(std::abs(*d.normalized_variance - normalized_variance_formula(vp, vm, t, Sign::minus)) < 1e-9);
    }
  }

  TEST_CASE("consistency for random symmetric inputs") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const double vp = 0.1 + 0.9 * u(rng);
      const double vm = 0.1 + 0.9 * u(rng);
      const auto s = fixtures::asymmetric_epr(vp, vm, 10.0 + 1e3 * u(rng));
      const double t = 0.05 + (2.0 * kPi - 0.1) * u(rng);
      const auto out = interfere_for_detection(s, 0, 1, t);
      for (auto [mode, sign] : {std::pair{0u, Sign::plus}, std::pair{1u, Sign::minus}}) {
        const auto r = detect_arm(out, mode, t);
        if (r.dark) continue;
        CHECK(std::abs(*r.normalized_variance - normalized_variance_formula(vp, vm, t, sign)) < 1e-9);
      }
    }
  }

  TEST_CASE("quarter-point variance is half the criterion sum") {
    for (double db : {1.0, 4.0, 7.0}) {
      const auto s = fixtures::epr_pair(db, db);
      const auto r = detect_arm(interfere_for_detection(s, 0, 1, kPi / 2), 0, kPi / 2);
      CHECK(*r.normalized_variance ==
            doctest::Approx(0.5 * duan_criterion(s, 0, 1, 1.0).criterion_sum).epsilon(1e-9));
    }
    const auto a = fixtures::asymmetric_epr(0.25, 0.63);
    const auto r = detect_arm(interfere_for_detection(a, 0, 1, kPi / 2), 0, kPi / 2);
    CHECK(std::abs(*r.normalized_variance - 0.5 * duan_criterion(a, 0, 1, 1.0).criterion_sum) < 1e-9);
  }
}

TEST_SUITE("theta scans") {
  TEST_CASE("quarter-phase scan is flat") {
    PipelineConfig cfg;
    const auto grid = linear_grid(0.0, 2.0 * kPi, 181);
    const auto scan = scan_pipeline(cfg, grid);
    REQUIRE(scan.arm_c.size() == 181);
    int lit = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(scan.arm_c[i].theta == grid[i]);
      CHECK(scan.arm_c[i].arm == "c");
      for (const auto* r : {&scan.arm_c[i], &scan.arm_d[i]}) {
        if (r->dark) continue;
        ++lit;
        CHECK(std::abs(*r->normalized_variance - kVs) < 1e-9);
      }
    }
    CHECK(lit == 2 * 181 - 3);
  }

  TEST_CASE("in-phase first interference oscillates with period pi") {
    PipelineConfig cfg;
    cfg.phi = 0.0;
    const auto grid = linear_grid(0.0, 2.0 * kPi, 181);
    const auto scan = scan_pipeline(cfg, grid);
    double lo = 1e9;
    double hi = -1e9;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = *scan.arm_c[i].normalized_variance;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      // period pi: grid index i + 90 is theta + pi
      if (i + 90 < grid.size()) {
        CHECK(std::abs(v - *scan.arm_c[i + 90].normalized_variance) < 1e-9);
      }
    }
    CHECK(lo == doctest::Approx(kVs).epsilon(1e-9));
    // a lit arm only ever sees the mean of the two input noises
    CHECK(hi == doctest::Approx(0.5 * (kVs + kVa)).epsilon(1e-9));
  }

  TEST_CASE("coherent inputs are shot-noise limited") {
    PipelineConfig cfg;
    cfg.squeeze_db_a = cfg.squeeze_db_b = 0.0;
    for (double phi : {0.0, kPi / 4, kPi / 2}) {
      cfg.phi = phi;
      const auto grid = linear_grid(0.0, 2.0 * kPi, 37);
      for (const auto& r : scan_pipeline(cfg, grid).arm_c) {
        if (!r.dark) CHECK(*r.normalized_variance == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("arm intensities add up to the input") {
    PipelineConfig cfg;
    cfg.phi = 0.9;
    cfg.second_phase = 0.3;
    const auto grid = linear_grid(-1.0, 7.0, 50);
    const auto scan = scan_pipeline(cfg, grid);
    const double total = 2.0 * cfg.amplitude * cfg.amplitude;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(scan.arm_c[i].shot_noise + scan.arm_d[i].shot_noise - total) < 1e-12 * total);
    }
  }

  TEST_CASE("order independent of scheduling") {
    PipelineConfig cfg;
    cfg.phi = 0.4;
    const auto grid = linear_grid(0.0, 3.0, 64);
    const auto a = scan_pipeline(cfg, grid);
    const auto b = scan_pipeline(cfg, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(a.arm_c[i].amplitude_noise == b.arm_c[i].amplitude_noise);
      const auto single = run_pipeline([&] {
        auto c = cfg;
        c.theta = grid[i];
        return c;
      }());
      CHECK(single.arm_c.amplitude_noise == a.arm_c[i].amplitude_noise);
    }
  }

  TEST_CASE("grid errors") {
    const auto family = theta_family(PipelineConfig{});
    const std::vector<double> empty;
    CHECK_THROWS_AS(scan_theta(family, empty, 0), std::invalid_argument);
    const std::vector<double> bad{0.0, std::nan("")};
    CHECK_THROWS_AS(scan_theta(family, bad, 0), std::invalid_argument);
    CHECK_THROWS_AS(linear_grid(0.0, 1.0, 0), std::invalid_argument);
    CHECK(linear_grid(0.0, 1.0, 1) == std::vector<double>{0.0});
  }
}
