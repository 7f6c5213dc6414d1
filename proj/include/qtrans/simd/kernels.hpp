#pragma once

// Data-parallel inner loops used by the scattering and gradient code.
//
// Every kernel has a scalar reference implementation; vector variants
// (AVX2+FMA on x86-64, NEON on AArch64) are selected once at runtime from
// the CPU feature bits and must agree with the reference to rounding.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qtrans::simd {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2, Neon };

std::string_view name(Backend b) noexcept;

struct KernelTable {
  Backend backend;

  // out[i] = scale * Im(conj(a[i]) * b[i] * w)
  void (*im_conj_product)(const cplx* a, const cplx* b, cplx w, double scale, double* out,
                          std::size_t n);

  // out[i] = p * c[i] + d * s[i]   (complex p, d; real c, s)
  void (*real_combination)(const double* c, const double* s, cplx p, cplx d, cplx* out,
                           std::size_t n);

  // Composite trapezoid over consecutive panels sharing endpoints:
  // values has n_panels * per_panel + 1 entries, panel j spans
  // values[j*per_panel .. (j+1)*per_panel]; out[j] = dx * trapezoid sum.
  void (*panel_trapezoid)(const double* values, std::size_t n_panels, std::size_t per_panel,
                          double dx, double* out);

  // Batched SU(1,1) product acc <- slab * acc on n independent lanes:
  //   alpha' = sa*aa + sb*conj(ab),  beta' = sa*ab + sb*conj(aa)
  void (*su11_compose)(const cplx* slab_alpha, const cplx* slab_beta, cplx* acc_alpha,
                       cplx* acc_beta, std::size_t n);

  double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
#if defined(QTRANS_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif
#if defined(QTRANS_HAVE_NEON)
const KernelTable& neon_kernels() noexcept;
#endif

/// Backends compiled in and supported by this CPU; Scalar is always first.
std::vector<Backend> available_backends();

/// Kernel table for a specific backend; throws std::invalid_argument if it
/// is not available.
const KernelTable& kernels_for(Backend b);

/// The active table (best available unless overridden).
const KernelTable& kernels() noexcept;

/// Overrides the active backend process-wide (tests, benchmarking).
void set_backend(Backend b);
Backend active_backend() noexcept;

// Span conveniences over the active table.
inline void im_conj_product(std::span<const cplx> a, std::span<const cplx> b, cplx w,
                            double scale, std::span<double> out) {
  kernels().im_conj_product(a.data(), b.data(), w, scale, out.data(), out.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot(a.data(), b.data(), a.size());
}

}  // namespace qtrans::simd
