#include "kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace l1dual::simd {

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar",
                                 detail::dot_scalar,
                                 detail::axpy_scalar,
                                 detail::sum_abs_scalar,
                                 detail::max_abs_scalar,
                                 detail::soft_threshold_scalar,
                                 detail::clamp_toward_scalar};
  return table;
}

const KernelTable* avx2_kernels() noexcept {
#ifdef L1DUAL_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept {
  if (const char* env = std::getenv("L1DUAL_KERNELS"); env && std::string_view(env) == "scalar") {
    return scalar_kernels();
  }
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace l1dual::simd
