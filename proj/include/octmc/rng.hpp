#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace octmc {

// Seeded random stream. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; the transforms below are written out explicitly
// so draws are identical across standard library implementations.
class RandomStream {
 public:
  // `stream` separates independent consumers (timing, segmentation, ...)
  // sharing one scenario seed.
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  // Standard normal (Box-Muller, spare value cached).
  double normal();
  // Failures before the first success of a Bernoulli(p) sequence; p in (0, 1].
  std::uint64_t geometric(double p);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace octmc
