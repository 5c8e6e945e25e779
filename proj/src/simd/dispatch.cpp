#include <cstdlib>
#include <string_view>

#include "fso/simd/kernels.hpp"

namespace fso::simd {

#if defined(FSO_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(FSO_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  if (supported) return &avx2::kTable;
#endif
  return nullptr;
}

const KernelTable& active() noexcept {
  static const KernelTable* chosen = [] {
    const char* forced = std::getenv("FSO_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return &scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace fso::simd
