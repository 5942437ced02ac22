#include <atomic>
#include <cstdlib>
#include <string>

#include "ascnet/common/log.hpp"
#include "ascnet/simd/kernels.hpp"

namespace ascnet::simd {

#if defined(ASCNET_HAVE_AVX2)
const KernelTable* avx2_table_unchecked();
#endif

const KernelTable* avx2_kernels() {
#if defined(ASCNET_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* initial_table() {
  const KernelTable* best = avx2_kernels() ? avx2_kernels() : &scalar_kernels();
  if (const char* env = std::getenv("ASCNET_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && !avx2_kernels())
      log::warn("ASCNET_SIMD=avx2 requested but unavailable; using scalar kernels");
  }
  return best;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

const KernelTable& active() { return *active_slot().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
  if (name == "scalar") {
    active_slot() = &scalar_kernels();
    return true;
  }
  if (name == "avx2" && avx2_kernels()) {
    active_slot() = avx2_kernels();
    return true;
  }
  return false;
}

std::vector<std::string_view> available() {
  std::vector<std::string_view> out{"scalar"};
  if (avx2_kernels()) out.emplace_back("avx2");
  return out;
}

}  // namespace ascnet::simd
