#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qtrans/gradient.hpp"
#include "qtrans/rng.hpp"
#include "qtrans/scattering.hpp"
#include "qtrans/simd/kernels.hpp"

using namespace qtrans;
namespace simd = qtrans::simd;

namespace {

std::vector<cplx> random_cplx(Rng& rng, std::size_t n) {
  std::vector<cplx> v(n);
  for (auto& z : v) z = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
  return v;
}

std::vector<double> random_real(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

// Restores the process-wide backend when a test case exits.
struct BackendGuard {
  simd::Backend saved = simd::active_backend();
  ~BackendGuard() { simd::set_backend(saved); }
};

constexpr double kTol = 1e-14;

}  // namespace

TEST_CASE("backend registry") {
  const auto av = simd::available_backends();
  REQUIRE_FALSE(av.empty());
  CHECK(av.front() == simd::Backend::Scalar);
  CHECK(simd::kernels_for(simd::Backend::Scalar).backend == simd::Backend::Scalar);
  CHECK(simd::name(simd::Backend::Avx2) == "avx2");
  for (simd::Backend b : {simd::Backend::Avx2, simd::Backend::Neon}) {
    const bool listed = std::find(av.begin(), av.end(), b) != av.end();
    if (!listed) CHECK_THROWS_AS(simd::kernels_for(b), std::invalid_argument);
  }
  MESSAGE("active backend: " << simd::name(simd::active_backend()));
}

TEST_CASE("every backend agrees with the scalar reference") {
  const auto& ref = simd::scalar_kernels();
  for (simd::Backend b : simd::available_backends()) {
    const auto& k = simd::kernels_for(b);
    CAPTURE(simd::name(b));
    Rng rng(100);
    for (std::size_t n = 0; n <= 37; ++n) {
      CAPTURE(n);
      const auto a = random_cplx(rng, n), c = random_cplx(rng, n);
      const cplx w{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};

      std::vector<double> o1(n), o2(n);
      ref.im_conj_product(a.data(), c.data(), w, 0.7, o1.data(), n);
      k.im_conj_product(a.data(), c.data(), w, 0.7, o2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(o1[i] - o2[i]) <= kTol);

      const auto rc = random_real(rng, n), rs = random_real(rng, n);
      std::vector<cplx> z1(n), z2(n);
      ref.real_combination(rc.data(), rs.data(), w, cplx{0.3, -1.2}, z1.data(), n);
      k.real_combination(rc.data(), rs.data(), w, cplx{0.3, -1.2}, z2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(z1[i] - z2[i]) <= kTol);

      auto aa1 = random_cplx(rng, n), ab1 = random_cplx(rng, n);
      auto aa2 = aa1, ab2 = ab1;
      ref.su11_compose(a.data(), c.data(), aa1.data(), ab1.data(), n);
      k.su11_compose(a.data(), c.data(), aa2.data(), ab2.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(aa1[i] - aa2[i]) <= 4 * kTol);
        CHECK(std::abs(ab1[i] - ab2[i]) <= 4 * kTol);
      }

      CHECK(std::abs(ref.dot(rc.data(), rs.data(), n) - k.dot(rc.data(), rs.data(), n)) <= 1e-13);

      for (std::size_t per : {1, 3, 8}) {
        const auto vals = random_real(rng, n * per + 1);
        std::vector<double> t1(n), t2(n);
        ref.panel_trapezoid(vals.data(), n, per, 0.1, t1.data());
        k.panel_trapezoid(vals.data(), n, per, 0.1, t2.data());
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(t1[i] - t2[i]) <= kTol);
      }
    }
  }
}

TEST_CASE("end-to-end results do not depend on the backend") {
  BackendGuard guard;
  Rng rng(7);
  PotentialSpec spec{1.0, std::vector<double>(8)};
  for (double& v : spec.cells) v = rng.uniform(-3.0, 3.0);
  std::vector<double> energies;
  for (int i = 0; i < 29; ++i) energies.push_back(0.2 + 0.17 * i);

  simd::set_backend(simd::Backend::Scalar);
  const auto g_ref = analytic_gradient(spec, 1.7, 32, CellQuadrature::Trapezoid);
  const auto g_an = analytic_gradient(spec, 1.7);
  const auto T_ref = transmission_sweep(spec, energies);

  for (simd::Backend b : simd::available_backends()) {
    CAPTURE(simd::name(b));
    simd::set_backend(b);
    CHECK(simd::active_backend() == b);
    const auto g = analytic_gradient(spec, 1.7, 32, CellQuadrature::Trapezoid);
    for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(std::abs(g.values[i] - g_ref.values[i]) <= 1e-13);
    for (std::size_t j = 0; j < g.cell_gradient.size(); ++j)
      CHECK(std::abs(g.cell_gradient[j] - g_ref.cell_gradient[j]) <= 1e-13);
    const auto ga = analytic_gradient(spec, 1.7);
    for (std::size_t j = 0; j < ga.cell_gradient.size(); ++j)
      CHECK(std::abs(ga.cell_gradient[j] - g_an.cell_gradient[j]) <= 1e-13);
    const auto T = transmission_sweep(spec, energies);
    for (std::size_t i = 0; i < T.size(); ++i) CHECK(std::abs(T[i] - T_ref[i]) <= 1e-13);
  }
}
