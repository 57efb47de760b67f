#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "octmc/metrics.hpp"
#include "oracles.hpp"

using namespace octmc;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sine(double a, double t) { return a * std::sin(kTwoPi * t / 5.0); }

Trace with_window(Trace t, double start, double end) {
  for (auto& r : t.rows) {
    if (std::abs(r.t_s - start) < 1e-9) r.event = "insert_done|inject_start";
    if (std::abs(r.t_s - end) < 1e-9) r.event = "inject_end";
  }
  return t;
}

ScenarioConfig inject_config() {
  ScenarioConfig c;
  c.kind = ScenarioKind::inject;
  return c;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("perfect tracking has zero error, zero lag and unit gain") {
    const auto t = oracle::synthetic_trace(30.0, 0.01, [](double t) { return sine(100.0, t); },
                                           [](double t) { return 2000.0 + sine(100.0, t); });
    const auto m = compute_metrics(t, 5.0);
    CHECK(m.max_deviation_um == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(m.rms_error_um < 1e-9);
    CHECK(std::abs(m.drift_slope_um_s) < 1e-9);
    REQUIRE(m.phase_lag_s.has_value());
    CHECK(std::abs(*m.phase_lag_s) < 1e-6);
    REQUIRE(m.amplitude_ratio.has_value());
    CHECK(*m.amplitude_ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(m.injection.has_value());
  }

  TEST_CASE("a delayed copy reports its delay") {
    const auto t = oracle::synthetic_trace(30.0, 0.01, [](double t) { return sine(100.0, t); },
                                           [](double t) { return 2000.0 + sine(100.0, t - 0.3); });
    const auto m = compute_metrics(t, 5.0);
    REQUIRE(m.phase_lag_s.has_value());
    CHECK(std::abs(*m.phase_lag_s - 0.3) < 0.02);
    // |e| peaks at 2A sin(pi * 0.3 / 5) plus the initial offset A sin(2 pi * 0.3 / 5).
    const double peak = 200.0 * std::sin(std::numbers::pi * 0.3 / 5.0) + 100.0 * std::sin(kTwoPi * 0.3 / 5.0);
    CHECK(m.max_deviation_um == doctest::Approx(peak).epsilon(1e-3));
  }

  TEST_CASE("a lead shows up as a negative lag") {
    const auto t = oracle::synthetic_trace(30.0, 0.01, [](double t) { return sine(100.0, t); },
                                           [](double t) { return sine(60.0, t + 0.45); });
    const auto m = compute_metrics(t, 5.0);
    REQUIRE(m.phase_lag_s.has_value());
    CHECK(*m.phase_lag_s == doctest::Approx(-0.45).epsilon(0.03));
    CHECK(*m.amplitude_ratio == doctest::Approx(0.6).epsilon(0.01));
  }

  TEST_CASE("a linear drift is measured as the slope of the error") {
    const auto t = oracle::synthetic_trace(60.0, 0.01, [](double t) { return sine(100.0, t); },
                                           [](double t) { return sine(100.0, t) + 1.0 * t; });
    const auto m = compute_metrics(t, 5.0);
    CHECK(std::abs(m.drift_slope_um_s - 1.0) < 0.05);
    CHECK(m.max_deviation_um == doctest::Approx(60.0));
  }

  TEST_CASE("a stationary needle has no lag and zero amplitude ratio") {
    const auto t = oracle::synthetic_trace(20.0, 0.01, [](double t) { return sine(100.0, t); },
                                           [](double) { return 2000.0; });
    const auto m = compute_metrics(t, 5.0);
    CHECK(m.max_deviation_um == doctest::Approx(100.0));
    CHECK(m.rms_error_um == doctest::Approx(100.0 / std::sqrt(2.0)).epsilon(1e-3));
    CHECK_FALSE(m.phase_lag_s.has_value());
    REQUIRE(m.amplitude_ratio.has_value());
    CHECK(*m.amplitude_ratio < 1e-9);
  }

  TEST_CASE("traces shorter than two periods have no lag or amplitude") {
    const auto t = oracle::synthetic_trace(9.0, 0.01, [](double t) { return sine(100.0, t); },
                                           [](double t) { return sine(100.0, t - 0.2); });
    const auto m = compute_metrics(t, 5.0);
    CHECK_FALSE(m.phase_lag_s.has_value());
    CHECK_FALSE(m.amplitude_ratio.has_value());
    CHECK(m.max_deviation_um > 0.0);
  }

  TEST_CASE("an empty trace is rejected") {
    CHECK_THROWS_AS(compute_metrics(Trace{}, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(resample(Trace{}, 0.01), std::invalid_argument);
  }

  TEST_CASE("metric invariants on random traces") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 300; ++i) {
      Trace t;
      double time = 0.0;
      const int n = 2 + static_cast<int>(gen() % 400);
      for (int k = 0; k < n; ++k) {
        TraceRow r;
        r.t_s = time;
        r.stage_z_um = 100.0 * u(gen);
        r.true_ilm_z_um = 2500.0 + r.stage_z_um;
        r.true_rpe_z_um = r.true_ilm_z_um + 250.0;
        r.needle_tip_z_um = 2000.0 + 100.0 * u(gen);
        t.rows.push_back(r);
        time += 0.001 + 0.05 * (u(gen) + 1.0);
      }
      const auto m = compute_metrics(t, 5.0);
      REQUIRE(m.rms_error_um >= 0.0);
      REQUIRE(m.rms_error_um <= m.max_deviation_um + 1e-9);
      REQUIRE(m.rms_error_ilm_um <= m.max_deviation_ilm_um + 1e-9);
      if (m.phase_lag_s) REQUIRE(std::abs(*m.phase_lag_s) <= 2.5 + 1e-9);
    }
  }

  TEST_CASE("resampling interpolates linearly and holds the ends") {
    Trace t;
    t.rows.push_back(TraceRow{.t_s = 0.0, .stage_z_um = 0.0, .needle_tip_z_um = 10.0});
    t.rows.push_back(TraceRow{.t_s = 0.015, .stage_z_um = 3.0, .needle_tip_z_um = 10.0});
    t.rows.push_back(TraceRow{.t_s = 0.04, .stage_z_um = 8.0, .needle_tip_z_um = 20.0});
    const auto s = resample(t, 0.01);
    REQUIRE(s.stage.size() == 5);
    CHECK(s.stage[0] == 0.0);
    CHECK(s.stage[1] == doctest::Approx(2.0));
    CHECK(s.stage[2] == doctest::Approx(4.0));
    CHECK(s.stage[4] == doctest::Approx(8.0));
    CHECK(s.needle[3] == doctest::Approx(16.0));
  }

  TEST_CASE("cross-correlation lag of a shifted discrete sequence") {
    std::vector<double> a(500), b(500);
    for (std::size_t i = 0; i < 500; ++i) {
      a[i] = std::sin(0.05 * static_cast<double>(i));
      b[i] = std::sin(0.05 * (static_cast<double>(i) - 7.0));
    }
    const auto lag = cross_correlation_lag(a, b, 0.01, 0.5);
    REQUIRE(lag.has_value());
    CHECK(*lag == doctest::Approx(0.07).epsilon(0.02));
    CHECK_FALSE(cross_correlation_lag(a, std::vector<double>(500, 1.0), 0.01, 0.5).has_value());
  }

  TEST_CASE("least-squares slope") {
    CHECK(linear_slope({1.0, 3.0, 5.0, 7.0}, 0.5) == doctest::Approx(4.0));
    CHECK(linear_slope({2.0}, 0.1) == 0.0);
  }

  TEST_CASE("classifier: tip held between the layers is a bleb") {
    auto t = oracle::synthetic_trace(10.0, 0.01, [](double t) { return sine(100.0, t); },
                                     [](double t) { return 2625.0 + sine(100.0, t); });
    CHECK(classify_injection(with_window(t, 1.0, 7.0), inject_config()) == InjectionOutcome::bleb);
  }

  TEST_CASE("classifier: any contact with the RPE wins over occupancy") {
    auto t = oracle::synthetic_trace(10.0, 0.01, [](double) { return 0.0; },
                                     [](double t) { return t > 5.0 && t < 5.02 ? 2760.0 : 2625.0; });
    CHECK(classify_injection(with_window(t, 1.0, 7.0), inject_config()) == InjectionOutcome::rpe_breach);
    // Outside the window it does not count.
    CHECK(classify_injection(with_window(t, 1.0, 4.0), inject_config()) == InjectionOutcome::bleb);
  }

  TEST_CASE("classifier: a tip mostly above the ILM is vitreous") {
    auto t = oracle::synthetic_trace(10.0, 0.01, [](double) { return 0.0; },
                                     [](double t) { return t < 4.0 ? 2400.0 : 2625.0; });
    CHECK(classify_injection(with_window(t, 1.0, 7.0), inject_config()) == InjectionOutcome::vitreous);
  }

  TEST_CASE("classifier: a tip resting on the ILM is indeterminate") {
    // 1 s of 6 s exactly on the surface: under 90% in band, nothing above.
    auto t = oracle::synthetic_trace(10.0, 0.01, [](double) { return 0.0; },
                                     [](double t) { return t >= 2.0 && t < 3.0 ? 2500.0 : 2625.0; });
    CHECK(classify_injection(with_window(t, 1.0, 7.0), inject_config()) == InjectionOutcome::indeterminate);
  }

  TEST_CASE("classifier: window never opened or wrong scenario kind") {
    const auto t = oracle::synthetic_trace(10.0, 0.01, [](double) { return 0.0; }, [](double) { return 2625.0; });
    CHECK(classify_injection(t, inject_config()) == InjectionOutcome::indeterminate);
    CHECK_THROWS_AS(classify_injection(t, ScenarioConfig{}), std::invalid_argument);
  }

  TEST_CASE("outcome names") {
    CHECK(outcome_name(InjectionOutcome::bleb) == "bleb");
    CHECK(outcome_name(InjectionOutcome::vitreous) == "vitreous");
    CHECK(outcome_name(InjectionOutcome::rpe_breach) == "rpe_breach");
    CHECK(outcome_name(InjectionOutcome::indeterminate) == "indeterminate");
  }
}
