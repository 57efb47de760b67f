#include <cstdlib>
#include <cstring>

#include "octmc/kernels/kernels.hpp"

namespace octmc::kernels {

#if defined(OCTMC_BUILD_AVX2)
const KernelTable* avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#if defined(OCTMC_BUILD_AVX2)
  return avx2_table_impl();
#else
  return nullptr;
#endif
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(OCTMC_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (isa == Isa::avx2 && isa_supported(Isa::avx2)) return *avx2_table();
  return scalar_table();
}

namespace {

const KernelTable& select() {
  const char* force = std::getenv("OCTMC_FORCE_SCALAR");
  if (force != nullptr && std::strcmp(force, "0") != 0 && force[0] != '\0') return scalar_table();
  return table_for(Isa::avx2);
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& selected = select();
  return selected;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace octmc::kernels
