#include "octmc/kernels/kernels.hpp"

namespace octmc::kernels {
namespace {

std::size_t find_first_equal_scalar(const std::uint8_t* data, std::size_t n, std::uint8_t value) {
  for (std::size_t i = 0; i < n; ++i) {
    if (data[i] == value) return i;
  }
  return n;
}

std::size_t find_first_nonzero_scalar(const std::uint8_t* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (data[i] != 0) return i;
  }
  return n;
}

// Four independent accumulators; same pairing the AVX2 path uses per lane so
// both routes stay within a few ulps of each other.
double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += a[i] * b[i];
    acc[1] += a[i + 1] * b[i + 1];
    acc[2] += a[i + 2] * b[i + 2];
    acc[3] += a[i + 3] * b[i + 3];
  }
  double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

constexpr KernelTable kScalar{Isa::scalar, &find_first_equal_scalar, &find_first_nonzero_scalar,
                              &dot_scalar};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace octmc::kernels
