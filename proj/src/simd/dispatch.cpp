#include "pcgrasp/simd/kernels.hpp"

#include <cstdlib>
#include <string>

namespace pcgrasp::simd {

namespace detail {
#if !defined(PCGRASP_HAVE_AVX2)
const KernelTable* avx2_table_if_compiled() { return nullptr; }
#endif
#if !defined(PCGRASP_HAVE_NEON)
const KernelTable* neon_table_if_compiled() { return nullptr; }
#endif
}  // namespace detail

const KernelTable& scalar_kernels() { return detail::kScalarTable; }

const KernelTable* avx2_kernels() {
#if defined(PCGRASP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? detail::avx2_table_if_compiled() : nullptr;
#else
  return detail::avx2_table_if_compiled();
#endif
}

const KernelTable* neon_kernels() { return detail::neon_table_if_compiled(); }

const KernelTable& kernels() {
  static const KernelTable* selected = [] {
    if (const char* env = std::getenv("PCGRASP_SIMD"); env && std::string(env) == "scalar")
      return &scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return t;
    if (const KernelTable* t = neon_kernels()) return t;
    return &scalar_kernels();
  }();
  return *selected;
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

}  // namespace pcgrasp::simd
