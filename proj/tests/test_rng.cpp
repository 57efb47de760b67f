#include <doctest.h>

#include <cmath>

#include "octmc/rng.hpp"

using octmc::RandomStream;

TEST_SUITE("rng") {
  TEST_CASE("identical seed and stream reproduce the same draws") {
    RandomStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
    bool differs_stream = false;
    bool differs_seed = false;
    for (int i = 0; i < 100; ++i) {
      const auto x = a.next_u64();
      CHECK(x == b.next_u64());
      differs_stream = differs_stream || x != c.next_u64();
      differs_seed = differs_seed || x != d.next_u64();
    }
    CHECK(differs_stream);
    CHECK(differs_seed);
  }

  TEST_CASE("uniform draws lie in [0, 1) and average one half") {
    RandomStream r(1);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const double u = r.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
  }

  TEST_CASE("below stays in range and covers every value") {
    RandomStream r(2);
    int counts[7] = {};
    for (int i = 0; i < 70000; ++i) {
      const auto v = r.below(7);
      REQUIRE(v < 7);
      ++counts[v];
    }
    for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  }

  TEST_CASE("normal draws have unit variance") {
    RandomStream r(3);
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double x = r.normal();
      s += x;
      s2 += x * x;
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("geometric draws have mean (1 - p) / p") {
    RandomStream r(4);
    for (double p : {0.5, 0.1, 0.01}) {
      double s = 0.0;
      const int n = 50000;
      for (int i = 0; i < n; ++i) s += static_cast<double>(r.geometric(p));
      CHECK(s / n == doctest::Approx((1.0 - p) / p).epsilon(0.05));
    }
    CHECK(r.geometric(1.0) == 0);
  }
}
