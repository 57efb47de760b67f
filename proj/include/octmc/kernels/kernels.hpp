#pragma once

// Data-parallel inner loops used by the simulator.
//
// Every kernel has a scalar reference implementation and, where the build and
// the CPU allow it, an AVX2 variant. The active table is chosen once at first
// use from CPUID; OCTMC_FORCE_SCALAR=1 in the environment pins the scalar path.
// Byte kernels are exact, so the variants must agree bit for bit. The dot
// product is allowed to differ by summation order only.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace octmc::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // Index of the first byte equal to `value`, or `n` if none.
  std::size_t (*find_first_equal)(const std::uint8_t* data, std::size_t n, std::uint8_t value);
  // Index of the first nonzero byte, or `n` if none.
  std::size_t (*find_first_nonzero)(const std::uint8_t* data, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table();
// Null when the build has no AVX2 translation unit.
const KernelTable* avx2_table();

bool isa_supported(Isa isa);
const KernelTable& table_for(Isa isa);
const KernelTable& active();

std::string_view isa_name(Isa isa);

inline std::size_t find_first_equal(std::span<const std::uint8_t> data, std::uint8_t value) {
  return active().find_first_equal(data.data(), data.size(), value);
}

inline std::size_t find_first_nonzero(std::span<const std::uint8_t> data) {
  return active().find_first_nonzero(data.data(), data.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  return active().dot(a.data(), b.data(), n);
}

}  // namespace octmc::kernels
