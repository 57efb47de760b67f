#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "octmc/phantom.hpp"
#include "oracles.hpp"

using namespace octmc;

namespace {

// Tip over the tissue centre at depth z.
Vec3 tip_at(double z) { return Vec3{2000.0, 50.0, z}; }

}  // namespace

TEST_SUITE("phantom") {
  TEST_CASE("motion displacement examples") {
    const auto m100 = MotionProfile::sine(100.0, 5.0);
    CHECK(motion_displacement(m100, 0.0) == 0.0);
    CHECK(motion_displacement(m100, 1.25) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(std::abs(motion_displacement(MotionProfile::sine(25.0, 5.0), 2.5)) < 1e-12);
  }

  TEST_CASE("composite displacement is bounded by the amplitude sum and periodic") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> amp(0.0, 120.0), phase(-3.0, 3.0), t(0.0, 200.0);
    for (int iter = 0; iter < 200; ++iter) {
      MotionProfile m;
      const double periods[] = {5.0, 1.0, 2.5};
      for (double p : periods) m.components.push_back({amp(gen), p, phase(gen)});
      CHECK(m.validate().empty());
      for (int k = 0; k < 50; ++k) {
        const double ts = t(gen);
        const double z = motion_displacement(m, ts);
        REQUIRE(std::abs(z) <= m.amplitude_bound_um() + 1e-9);
        // lcm(5, 1, 2.5) = 5
        REQUIRE(std::abs(motion_displacement(m, ts + 5.0) - z) < 1e-9);
      }
    }
  }

  TEST_CASE("physiological presets") {
    CHECK(heartbeat_profile().primary().amplitude_um == 81.0);
    CHECK(heartbeat_profile().primary().period_s == 1.0);
    CHECK(supine_profile().primary().amplitude_um == 21.3);
  }

  TEST_CASE("profile validation names the offending field") {
    MotionProfile m = MotionProfile::sine(-5.0, 0.0);
    m.components.push_back({1.0, -1.0, 0.0});
    const auto issues = m.validate();
    REQUIRE(issues.size() == 3);
    CHECK(issues[0].field == "amplitude_um");
    CHECK(issues[1].field == "period_s");
    CHECK(issues[2].field == "extra_components[0].period_s");
  }

  TEST_CASE("phantom config validation") {
    PhantomConfig c;
    CHECK(c.validate().empty());
    c.retina_thickness_um = 0.0;
    c.tethering_gain = 1.5;
    const auto issues = c.validate();
    REQUIRE(issues.size() == 2);
    CHECK(issues[0].field == "retina_thickness_um");
    CHECK(issues[1].field == "tethering_gain");
  }

  TEST_CASE("free tissue follows the stage and the needle above it is not inserted") {
    PhantomConfig cfg;
    const auto m = MotionProfile::sine(100.0, 5.0);
    const auto s = phantom_state_at(cfg, m, 1.25, tip_at(1000.0), nullptr);
    CHECK(s.ilm_z_um == doctest::Approx(2600.0));
    CHECK(s.rpe_z_um - s.ilm_z_um == doctest::Approx(250.0));
    CHECK_FALSE(s.needle_inserted);
    CHECK_FALSE(s.tether_depth_um.has_value());
  }

  TEST_CASE("gain 0 with the needle inserted reduces to free motion") {
    PhantomConfig cfg;
    cfg.tethering_gain = 0.0;
    const auto m = MotionProfile::sine(100.0, 5.0);
    PhantomState s = phantom_state_at(cfg, m, 0.0, tip_at(2625.0), nullptr);
    REQUIRE(s.needle_inserted);
    for (double t = 0.01; t <= 1.25 + 1e-9; t += 0.01) s = phantom_state_at(cfg, m, t, tip_at(2625.0), &s);
    CHECK(s.ilm_z_um == doctest::Approx(2600.0));
  }

  TEST_CASE("gain 1 keeps the relative insertion depth fixed") {
    PhantomConfig cfg;
    cfg.tethering_gain = 1.0;
    const auto m = MotionProfile::sine(100.0, 5.0);
    // Tip at 50% of the retina: 125 um below the ILM.
    PhantomState s = phantom_state_at(cfg, m, 0.0, tip_at(2625.0), nullptr);
    for (int i = 1; i <= 1000; ++i) {
      const double t = i * 0.01;
      const double needle = 2625.0 + 30.0 * std::sin(t);
      s = phantom_state_at(cfg, m, t, tip_at(needle), &s);
      REQUIRE(s.needle_inserted);
      REQUIRE((needle - s.ilm_z_um) / (s.rpe_z_um - s.ilm_z_um) == doctest::Approx(0.5).epsilon(1e-12));
    }
  }

  TEST_CASE("gain 0.5 halves the oscillation under a fixed needle") {
    PhantomConfig cfg;
    cfg.tethering_gain = 0.5;
    const auto m = MotionProfile::sine(100.0, 5.0);
    const double needle = 2625.0;
    PhantomState s = phantom_state_at(cfg, m, 0.0, tip_at(needle), nullptr);
    const double anchor = needle - 2500.0;
    double lo = 1e9, hi = -1e9;
    for (int i = 1; i <= 500; ++i) {
      const double t = i * 0.01;
      s = phantom_state_at(cfg, m, t, tip_at(needle), &s);
      const double expected = oracle::tethered_ilm(0.5, 2500.0 + motion_displacement(m, t), needle, anchor);
      REQUIRE(s.ilm_z_um == doctest::Approx(expected).epsilon(1e-12));
      lo = std::min(lo, s.ilm_z_um);
      hi = std::max(hi, s.ilm_z_um);
    }
    CHECK((hi - lo) / 2.0 == doctest::Approx(50.0).epsilon(1e-3));
  }

  TEST_CASE("piercing re-anchors while holding preserves the anchor") {
    PhantomConfig cfg;
    const auto m = MotionProfile::sine(0.0, 5.0);
    PhantomState s = phantom_state_at(cfg, m, 0.0, tip_at(2550.0), nullptr, NeedleAction::pierce);
    CHECK(*s.tether_depth_um == doctest::Approx(50.0));
    s = phantom_state_at(cfg, m, 0.1, tip_at(2600.0), &s, NeedleAction::pierce);
    CHECK(*s.tether_depth_um == doctest::Approx(100.0));
    CHECK(s.ilm_z_um == doctest::Approx(2500.0));
    s = phantom_state_at(cfg, m, 0.2, tip_at(2650.0), &s, NeedleAction::hold);
    CHECK(*s.tether_depth_um == doctest::Approx(100.0));
    CHECK(s.ilm_z_um == doctest::Approx(0.3 * 2500.0 + 0.7 * 2550.0));
  }

  TEST_CASE("withdrawing above the held surface releases the tissue") {
    PhantomConfig cfg;
    const auto m = MotionProfile::sine(0.0, 5.0);
    PhantomState s = phantom_state_at(cfg, m, 0.0, tip_at(2600.0), nullptr);
    // A partial withdrawal lifts the held tissue with it.
    s = phantom_state_at(cfg, m, 0.1, tip_at(2400.0), &s);
    CHECK(s.needle_inserted);
    CHECK(s.ilm_z_um == doctest::Approx(oracle::tethered_ilm(0.7, 2500.0, 2400.0, 100.0)));
    // Release needs the tip above 2500 - 0.7 * 100 / 0.3.
    s = phantom_state_at(cfg, m, 0.2, tip_at(2200.0), &s);
    CHECK_FALSE(s.needle_inserted);
    CHECK(s.ilm_z_um == doctest::Approx(2500.0));
  }

  TEST_CASE("inserted flag matches tip depth versus ILM and layers stay rigid") {
    PhantomConfig cfg;
    const auto m = MotionProfile::sine(100.0, 5.0);
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> step(-40.0, 40.0);
    double needle = 2450.0;
    PhantomState s = phantom_state_at(cfg, m, 0.0, tip_at(needle), nullptr);
    for (int i = 1; i <= 5000; ++i) {
      needle += step(gen);
      const auto action = (i / 50) % 2 == 0 ? NeedleAction::hold : NeedleAction::pierce;
      s = phantom_state_at(cfg, m, i * 0.01, tip_at(needle), &s, action);
      REQUIRE(s.needle_inserted == (needle >= s.ilm_z_um));
      REQUIRE(s.rpe_z_um - s.ilm_z_um == doctest::Approx(250.0));
    }
  }

  TEST_CASE("gain 0 is memoryless") {
    PhantomConfig cfg;
    cfg.tethering_gain = 0.0;
    const auto m = MotionProfile::sine(100.0, 5.0);
    PhantomState prev = phantom_state_at(cfg, m, 0.0, tip_at(2700.0), nullptr);
    for (double t : {0.3, 1.1, 2.9}) {
      const auto with_history = phantom_state_at(cfg, m, t, tip_at(2550.0), &prev);
      const auto fresh = phantom_state_at(cfg, m, t, tip_at(2550.0), nullptr);
      CHECK(with_history.ilm_z_um == fresh.ilm_z_um);
      CHECK(with_history.needle_inserted == fresh.needle_inserted);
      prev = with_history;
    }
  }

  TEST_CASE("time moving backward is rejected") {
    PhantomConfig cfg;
    const auto m = MotionProfile::sine(100.0, 5.0);
    const auto s = phantom_state_at(cfg, m, 1.0, tip_at(0.0), nullptr);
    CHECK_THROWS_AS(phantom_state_at(cfg, m, 0.5, tip_at(0.0), &s), std::invalid_argument);
  }

  TEST_CASE("tether only drags the patch around the needle") {
    PhantomConfig cfg;
    cfg.tethering_gain = 1.0;
    const auto m = MotionProfile::sine(100.0, 5.0);
    PhantomState s = phantom_state_at(cfg, m, 0.0, tip_at(2600.0), nullptr);
    s = phantom_state_at(cfg, m, 1.25, tip_at(2600.0), &s);
    CHECK(*ilm_depth_at(cfg, s, 2000.0, 50.0) == doctest::Approx(2500.0));
    CHECK(*ilm_depth_at(cfg, s, 2000.0 + cfg.tether_radius_um + 1.0, 50.0) == doctest::Approx(2600.0));
    CHECK_FALSE(ilm_depth_at(cfg, s, 9000.0, 50.0).has_value());
  }
}
