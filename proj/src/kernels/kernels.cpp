#include <cstdlib>
#include <cstring>

#include "glvortex/kernels.hpp"

namespace glvortex::kernels {

#if GLVORTEX_HAVE_AVX2
const KernelTable& avx2_kernels();
#endif

const KernelTable* avx2_table() {
#if GLVORTEX_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* forced = std::getenv("GLVORTEX_KERNELS");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return table;
}

}  // namespace glvortex::kernels
