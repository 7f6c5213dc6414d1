#include "qtrans/simd/kernels.hpp"

namespace qtrans::simd {
namespace {

void im_conj_product(const cplx* a, const cplx* b, cplx w, double scale, double* out,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = scale * (std::conj(a[i]) * b[i] * w).imag();
}

void real_combination(const double* c, const double* s, cplx p, cplx d, cplx* out,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = p * c[i] + d * s[i];
}

void panel_trapezoid(const double* values, std::size_t n_panels, std::size_t per_panel,
                     double dx, double* out) {
  for (std::size_t j = 0; j < n_panels; ++j) {
    const double* v = values + j * per_panel;
    double sum = 0.5 * (v[0] + v[per_panel]);
    for (std::size_t i = 1; i < per_panel; ++i) sum += v[i];
    out[j] = dx * sum;
  }
}

void su11_compose(const cplx* slab_alpha, const cplx* slab_beta, cplx* acc_alpha,
                  cplx* acc_beta, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx aa = acc_alpha[i];
    const cplx ab = acc_beta[i];
    acc_alpha[i] = slab_alpha[i] * aa + slab_beta[i] * std::conj(ab);
    acc_beta[i] = slab_alpha[i] * ab + slab_beta[i] * std::conj(aa);
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

constexpr KernelTable kTable{Backend::Scalar, im_conj_product, real_combination,
                             panel_trapezoid,  su11_compose,    dot};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kTable; }

}  // namespace qtrans::simd
