// NEON variants for AArch64 (Advanced SIMD is baseline there, no runtime check).

#include <arm_neon.h>

#include "qtrans/simd/kernels.hpp"

namespace qtrans::simd {
namespace {

inline float64x2_t load1(const cplx* p) { return vld1q_f64(reinterpret_cast<const double*>(p)); }
inline void store1(cplx* p, float64x2_t v) { vst1q_f64(reinterpret_cast<double*>(p), v); }

// One complex per register: [re im].
inline float64x2_t cmul(float64x2_t x, float64x2_t y) {
  const float64x2_t xr = vdupq_laneq_f64(x, 0);
  const float64x2_t xi = vdupq_laneq_f64(x, 1);
  const float64x2_t ys = vextq_f64(y, y, 1);  // [yi yr]
  const float64x2_t t = vmulq_f64(xi, ys);    // [xi yi, xi yr]
  const float64x2_t sign = {-1.0, 1.0};
  return vfmaq_f64(vmulq_f64(t, sign), xr, y);
}

inline float64x2_t conj1(float64x2_t x) {
  const float64x2_t sign = {1.0, -1.0};
  return vmulq_f64(x, sign);
}

void im_conj_product(const cplx* a, const cplx* b, cplx w, double scale, double* out,
                     std::size_t n) {
  const double wr = scale * w.real();
  const double wi = scale * w.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t av = load1(a + i);
    const float64x2_t bv = load1(b + i);
    const double re = vaddvq_f64(vmulq_f64(av, bv));
    const float64x2_t cr = vmulq_f64(av, vextq_f64(bv, bv, 1));
    const double im = vgetq_lane_f64(cr, 0) - vgetq_lane_f64(cr, 1);
    out[i] = re * wi + im * wr;
  }
}

void real_combination(const double* c, const double* s, cplx p, cplx d, cplx* out,
                      std::size_t n) {
  const float64x2_t pv = load1(&p);
  const float64x2_t dv = load1(&d);
  for (std::size_t i = 0; i < n; ++i) {
    store1(out + i, vfmaq_n_f64(vmulq_n_f64(dv, s[i]), pv, c[i]));
  }
}

void panel_trapezoid(const double* values, std::size_t n_panels, std::size_t per_panel,
                     double dx, double* out) {
  for (std::size_t j = 0; j < n_panels; ++j) {
    const double* v = values + j * per_panel;
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 1;
    for (; i + 2 <= per_panel; i += 2) acc = vaddq_f64(acc, vld1q_f64(v + i));
    double sum = vaddvq_f64(acc);
    for (; i < per_panel; ++i) sum += v[i];
    out[j] = dx * (sum + 0.5 * (v[0] + v[per_panel]));
  }
}

void su11_compose(const cplx* slab_alpha, const cplx* slab_beta, cplx* acc_alpha,
                  cplx* acc_beta, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t sa = load1(slab_alpha + i), sb = load1(slab_beta + i);
    const float64x2_t aa = load1(acc_alpha + i), ab = load1(acc_beta + i);
    store1(acc_alpha + i, vaddq_f64(cmul(sa, aa), cmul(sb, conj1(ab))));
    store1(acc_beta + i, vaddq_f64(cmul(sa, ab), cmul(sb, conj1(aa))));
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

constexpr KernelTable kTable{Backend::Neon, im_conj_product, real_combination,
                             panel_trapezoid, su11_compose,  dot};

}  // namespace

const KernelTable& neon_kernels() noexcept { return kTable; }

}  // namespace qtrans::simd
