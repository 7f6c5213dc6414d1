// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma
// and must only be entered after the runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include "qtrans/simd/kernels.hpp"

namespace qtrans::simd {
namespace {

// Complex numbers are processed interleaved, two per register: [re0 im0 re1 im1].

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul(__m256d x, __m256d y) {
  const __m256d yr = _mm256_movedup_pd(y);
  const __m256d yi = _mm256_permute_pd(y, 0xF);
  const __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, yr, _mm256_mul_pd(xs, yi));
}

inline __m256d conj2(__m256d x) {
  return _mm256_xor_pd(x, _mm256_set_pd(-0.0, 0.0, -0.0, 0.0));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// [x0 x1] -> [x0 x0 x1 x1]
inline __m256d spread2(const double* x) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(x)), _MM_SHUFFLE(1, 1, 0, 0));
}

void im_conj_product(const cplx* a, const cplx* b, cplx w, double scale, double* out,
                     std::size_t n) {
  const __m256d wr = _mm256_set1_pd(scale * w.real());
  const __m256d wi = _mm256_set1_pd(scale * w.imag());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a0 = load2(a + i), a1 = load2(a + i + 2);
    const __m256d b0 = load2(b + i), b1 = load2(b + i + 2);
    // Re(conj(a) b) = ar br + ai bi ; Im(conj(a) b) = ar bi - ai br
    const __m256d re = _mm256_hadd_pd(_mm256_mul_pd(a0, b0), _mm256_mul_pd(a1, b1));
    const __m256d im = _mm256_hsub_pd(_mm256_mul_pd(a0, _mm256_permute_pd(b0, 0x5)),
                                      _mm256_mul_pd(a1, _mm256_permute_pd(b1, 0x5)));
    // hadd/hsub leave lanes in order [e0 e2 e1 e3]
    const __m256d r = _mm256_fmadd_pd(re, wi, _mm256_mul_pd(im, wr));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(r, _MM_SHUFFLE(3, 1, 2, 0)));
  }
  for (; i < n; ++i) {
    const cplx z = std::conj(a[i]) * b[i];
    out[i] = z.real() * (scale * w.imag()) + z.imag() * (scale * w.real());
  }
}

void real_combination(const double* c, const double* s, cplx p, cplx d, cplx* out,
                      std::size_t n) {
  const __m256d pv = _mm256_setr_pd(p.real(), p.imag(), p.real(), p.imag());
  const __m256d dv = _mm256_setr_pd(d.real(), d.imag(), d.real(), d.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    store2(out + i, _mm256_fmadd_pd(pv, spread2(c + i), _mm256_mul_pd(dv, spread2(s + i))));
  }
  for (; i < n; ++i) out[i] = p * c[i] + d * s[i];
}

void panel_trapezoid(const double* values, std::size_t n_panels, std::size_t per_panel,
                     double dx, double* out) {
  for (std::size_t j = 0; j < n_panels; ++j) {
    const double* v = values + j * per_panel;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 1;
    for (; i + 4 <= per_panel; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
    double sum = hsum(acc);
    for (; i < per_panel; ++i) sum += v[i];
    out[j] = dx * (sum + 0.5 * (v[0] + v[per_panel]));
  }
}

void su11_compose(const cplx* slab_alpha, const cplx* slab_beta, cplx* acc_alpha,
                  cplx* acc_beta, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d sa = load2(slab_alpha + i), sb = load2(slab_beta + i);
    const __m256d aa = load2(acc_alpha + i), ab = load2(acc_beta + i);
    store2(acc_alpha + i, _mm256_add_pd(cmul(sa, aa), cmul(sb, conj2(ab))));
    store2(acc_beta + i, _mm256_add_pd(cmul(sa, ab), cmul(sb, conj2(aa))));
  }
  for (; i < n; ++i) {
    const cplx aa = acc_alpha[i];
    const cplx ab = acc_beta[i];
    acc_alpha[i] = slab_alpha[i] * aa + slab_beta[i] * std::conj(ab);
    acc_beta[i] = slab_alpha[i] * ab + slab_beta[i] * std::conj(aa);
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

constexpr KernelTable kTable{Backend::Avx2, im_conj_product, real_combination,
                             panel_trapezoid, su11_compose,  dot};

}  // namespace

const KernelTable& avx2_kernels() noexcept { return kTable; }

}  // namespace qtrans::simd
