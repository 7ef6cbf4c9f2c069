#include "doctest.h"

#include "cvent/interferometry.hpp"
#include "fixtures.hpp"

using namespace cvent;
using fixtures::kPi;
using fixtures::kVs;

namespace {

PipelineConfig coherent_config() {
  PipelineConfig c;
  c.squeeze_db_a = c.squeeze_db_b = 0.0;
  return c;
}

// phi = pi/4 with an in-phase second splitter: fringe visibility 1/sqrt(2)
PipelineConfig intermediate_config() {
  PipelineConfig c;
  c.phi = kPi / 4;
  c.second_phase = 0.0;
  return c;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("trivial Mach-Zehnder at phi = theta = 0") {
    PipelineConfig cfg;
    cfg.phi = 0.0;
    cfg.second_phase = 0.0;
    cfg.theta = 0.0;
    const auto r = run_pipeline(cfg);
    const double total = 2.0 * cfg.amplitude * cfg.amplitude;
    // all the light travels in arm 1
    CHECK(r.entangled.means[0].photon_number() == doctest::Approx(total).epsilon(1e-12));
    CHECK(r.entangled.means[1].photon_number() < 1e-9);
    // and the two squeezed inputs come back out unchanged
    CHECK((r.output.cov.matrix() - fixtures::squeezed_pair(4.0, 4.0).cov.matrix()).norm() < 1e-12);
    CHECK(*r.arm_c.normalized_variance == doctest::Approx(kVs).epsilon(1e-9));
    CHECK(*r.arm_d.normalized_variance == doctest::Approx(kVs).epsilon(1e-9));
    CHECK(r.output.labels == std::vector<std::string>{"c", "d"});
    CHECK(r.entangled.labels == std::vector<std::string>{"1", "2"});
  }

  TEST_CASE("second splitter phase only shifts the fringe") {
    PipelineConfig a;
    a.phi = kPi / 4;
    a.second_phase = 0.0;
    PipelineConfig b = a;
    b.second_phase = kPi / 2;
    for (double t : {0.1, 0.9, 2.0}) {
      a.theta = t;
      b.theta = t - kPi / 2;
      const auto ra = run_pipeline(a);
      const auto rb = run_pipeline(b);
      CHECK(ra.arm_c.mean_intensity == doctest::Approx(rb.arm_c.mean_intensity).epsilon(1e-9));
      CHECK(*ra.arm_c.normalized_variance == doctest::Approx(*rb.arm_c.normalized_variance).epsilon(1e-9));
    }
  }

  TEST_CASE("quarter-phase pipeline is phase insensitive in both lit arms") {
    for (double t : {0.2, 1.0, 2.0, 3.0, 4.5}) {
      PipelineConfig cfg;
      cfg.theta = t;
      const auto r = run_pipeline(cfg);
      CHECK(std::abs(*r.arm_c.normalized_variance - kVs) < 1e-9);
      CHECK(std::abs(*r.arm_d.normalized_variance - kVs) < 1e-9);
      CHECK(std::abs(*r.arm_c.normalized_variance - *r.arm_d.normalized_variance) < 1e-9);
      CHECK(r.arm_c.mean_intensity ==
            doctest::Approx(cfg.amplitude * cfg.amplitude * (1.0 + std::cos(t))).epsilon(1e-9));
    }
  }

  TEST_CASE("entangled arms carry the criterion") {
    const auto r = run_pipeline(PipelineConfig{});
    CHECK(duan_criterion(r.entangled, 0, 1, 1.0).criterion_sum == doctest::Approx(2.0 * kVs).epsilon(1e-12));
  }

  TEST_CASE("intermediate phi has intermediate fringe visibility") {
    const auto grid = linear_grid(0.0, 2.0 * kPi, 73);
    const auto visibility = [&](double phi) {
      PipelineConfig cfg;
      cfg.phi = phi;
      double lo = 1e300;
      double hi = 0.0;
      for (const auto& r : scan_pipeline(cfg, grid).arm_c) {
        lo = std::min(lo, r.mean_intensity);
        hi = std::max(hi, r.mean_intensity);
      }
      return (hi - lo) / (hi + lo);
    };
    CHECK(visibility(0.0) < 1e-9);
    CHECK(visibility(kPi / 4) == doctest::Approx(std::sin(kPi / 4)).epsilon(1e-3));
    CHECK(visibility(kPi / 2) == doctest::Approx(1.0).epsilon(1e-3));

    PipelineConfig mid;
    mid.phi = kPi / 4;
    double lo = 1e9;
    double hi = -1e9;
    for (const auto& r : scan_pipeline(mid, grid).arm_c) {
      lo = std::min(lo, *r.normalized_variance);
      hi = std::max(hi, *r.normalized_variance);
    }
    CHECK(lo >= kVs - 1e-9);
    CHECK(hi > kVs + 0.1);
  }

  TEST_CASE("configuration errors") {
    PipelineConfig cfg;
    cfg.amplitude = 0.0;
    CHECK_THROWS_AS(run_pipeline(cfg), std::invalid_argument);
    cfg = PipelineConfig{};
    cfg.phi = std::nan("");
    CHECK_THROWS_AS(run_pipeline(cfg), std::invalid_argument);
    cfg = PipelineConfig{};
    cfg.excess_a = 0.5;
    CHECK_THROWS_AS(run_pipeline(cfg), PhysicsError);
  }
}

TEST_SUITE("snr") {
  TEST_CASE("coherent beam") {
    const auto r = detect_arm(new_coherent({300.0, 0.0}), 0);
    CHECK(snr(r) == doctest::Approx(300.0));
  }

  TEST_CASE("squeezed arm") {
    PipelineConfig cfg;
    const auto r = run_pipeline(cfg).arm_c;
    REQUIRE(r.mean_intensity == doctest::Approx(1e6));
    CHECK(snr(r) == doctest::Approx(1e3 / std::sqrt(kVs)).epsilon(1e-9));
    CHECK(snr(r) == doctest::Approx(1584.9).epsilon(1e-4));
  }

  TEST_CASE("dark arm") {
    const auto r = detect_arm(new_coherent({0.0, 0.0}), 0);
    CHECK_THROWS_AS(snr(r), std::domain_error);
  }
}

TEST_SUITE("sensitivity") {
  TEST_CASE("coherent inputs reach the standard quantum limit") {
    const auto r = min_resolvable_phase(coherent_config(), kPi / 2);
    CHECK(r.n == doctest::Approx(1e6));
    CHECK(r.sql == doctest::Approx(1e-3));
    CHECK(r.delta_theta_min == doctest::Approx(1e-3).epsilon(0.01));
    CHECK(r.improvement_factor == doctest::Approx(1.0).epsilon(0.01));
    CHECK(r.gain_over_coherent == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("maximal entanglement at the quadrature point") {
    const auto r = min_resolvable_phase(PipelineConfig{}, kPi / 2);
    CHECK(r.closed_form_full_contrast == doctest::Approx(6.310e-4).epsilon(1e-3));
    CHECK(r.delta_theta_min == doctest::Approx(r.closed_form_full_contrast).epsilon(0.05));
    CHECK(r.delta_theta_linear == doctest::Approx(r.closed_form_full_contrast).epsilon(1e-4));
    CHECK(r.improvement_factor > 1.0);
  }

  TEST_CASE("reduced visibility near theta = 0") {
    const auto r = min_resolvable_phase(intermediate_config(), 0.0);
    CHECK(r.n == doctest::Approx(1e6).epsilon(1e-9));
    CHECK(r.closed_form_reduced_contrast == doctest::Approx(8.923e-4).epsilon(1e-3));
    CHECK(r.delta_theta_min == doctest::Approx(r.closed_form_reduced_contrast).epsilon(0.05));
  }

  TEST_CASE("entanglement gain is independent of the operating point") {
    for (double t : {kPi / 6, kPi / 4, kPi / 2, 1.2}) {
      const auto r = min_resolvable_phase(PipelineConfig{}, t);
      CHECK(r.delta_theta_min / r.coherent_delta_theta == doctest::Approx(std::sqrt(kVs)).epsilon(0.05));
    }
  }

  TEST_CASE("numeric result approaches the closed form with intensity") {
    double previous = 1e9;
    for (double n : {1e4, 1e6, 1e8}) {
      PipelineConfig cfg;
      const double amp = std::sqrt(n / (1.0 + std::cos(kPi / 3)));
      cfg.amplitude = amp;
      const auto r = min_resolvable_phase(cfg, kPi / 3);
      const double closed = std::sqrt(kVs / r.n) * std::abs(r.n / (amp * amp * std::sin(kPi / 3)));
      const double err = std::abs(r.delta_theta_min / closed - 1.0);
      CHECK(err < previous);
      previous = err;
    }
    CHECK(previous < 1e-3);
  }

  TEST_CASE("flat and dark operating points") {
    CHECK_THROWS_AS(min_resolvable_phase(PipelineConfig{}, kPi), std::domain_error);
    // phi = 0: both arms stay at alpha^2 whatever theta
    PipelineConfig flat;
    flat.phi = 0.0;
    CHECK_THROWS_AS(min_resolvable_phase(flat, 0.3), std::runtime_error);
  }
}

TEST_SUITE("dense coding") {
  TEST_CASE("unit modulation") {
    for (double t : {kPi / 2, 0.4, 1.3, 2.2}) {
      const auto r = dense_coding_readout(PipelineConfig{}, {1.0, 1.0}, t, true);
      CHECK(r.v_sq == doctest::Approx(kVs).epsilon(1e-12));
      CHECK(std::abs(r.v_plus / r.alpha_sq - 1.39811) < 1e-5);
      CHECK(std::abs(r.v_plus - r.v_plus_closed) < 1e-9 * r.alpha_sq);
      CHECK(r.coherent_bound_plus / r.alpha_sq == doctest::Approx(2.0));
      CHECK(r.snr_gain_x == doctest::Approx(1.4305).epsilon(1e-4));
      CHECK(r.v_plus >= r.alpha_sq * r.v_sq);
    }
  }

  TEST_CASE("difference channel at the quadrature point") {
    const auto r = dense_coding_readout(PipelineConfig{}, {0.3, 0.7}, kPi / 2, true);
    CHECK(std::abs(r.v_minus - r.v_minus_closed) < 1e-9 * r.alpha_sq);
    CHECK(r.snr_gain_y == doctest::Approx(1.7 / (kVs + 0.7)));
  }

  TEST_CASE("no modulation leaves the squeezing") {
    const auto r = dense_coding_readout(PipelineConfig{}, {0.0, 0.0}, kPi / 2);
    CHECK(r.v_plus / r.alpha_sq == doctest::Approx(kVs).epsilon(1e-12));
  }

  TEST_CASE("coherent channel has no gain") {
    for (double v : {0.1, 1.0, 5.0}) {
      const auto r = dense_coding_readout(coherent_config(), {v, v}, kPi / 2);
      CHECK(r.snr_gain_x == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(r.v_plus == doctest::Approx(r.coherent_bound_plus).epsilon(1e-9));
    }
  }

  TEST_CASE("strict mode rejects asymmetric entanglement") {
    Network net;
    net.input = fixtures::asymmetric_epr(0.25, 0.63);
    net.steps = {PhaseShift{1, kPi / 2}, BeamSplitter{0, 1, 0.5, kPi / 2}};
    CHECK_THROWS_AS(dense_coding_readout(net, 0, 0, 1, {1.0, 1.0}, kPi / 2, true), PhysicsError);
    const auto r = dense_coding_readout(net, 0, 0, 1, {1.0, 1.0}, kPi / 2, false);
    CHECK(r.v_sq == doctest::Approx(0.25));
    CHECK(r.v_sq_minus == doctest::Approx(0.63));
    CHECK_THROWS_AS(dense_coding_readout(PipelineConfig{}, {-1.0, 0.0}, kPi / 2), std::invalid_argument);
  }
}
