#include <atomic>
#include <stdexcept>

#include "qtrans/simd/kernels.hpp"

namespace qtrans::simd {
namespace {

bool cpu_supports(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(QTRANS_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(QTRANS_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* best() noexcept {
#if defined(QTRANS_HAVE_AVX2)
  if (cpu_supports(Backend::Avx2)) return &avx2_kernels();
#endif
#if defined(QTRANS_HAVE_NEON)
  return &neon_kernels();
#endif
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() noexcept {
  static std::atomic<const KernelTable*> table{best()};
  return table;
}

}  // namespace

std::string_view name(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
    if (cpu_supports(b)) out.push_back(b);
  }
  return out;
}

const KernelTable& kernels_for(Backend b) {
  if (!cpu_supports(b)) {
    throw std::invalid_argument("SIMD backend not available: " + std::string(name(b)));
  }
  switch (b) {
#if defined(QTRANS_HAVE_AVX2)
    case Backend::Avx2: return avx2_kernels();
#endif
#if defined(QTRANS_HAVE_NEON)
    case Backend::Neon: return neon_kernels();
#endif
    default: return scalar_kernels();
  }
}

const KernelTable& kernels() noexcept { return *active().load(std::memory_order_acquire); }

void set_backend(Backend b) { active().store(&kernels_for(b), std::memory_order_release); }

Backend active_backend() noexcept { return kernels().backend; }

}  // namespace qtrans::simd
