#include "qtrans/scattering.hpp"

#include <cmath>
#include <string>

#include "qtrans/error.hpp"
#include "qtrans/simd/kernels.hpp"

namespace qtrans {

namespace detail {

void require_scattering_energy(double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw ValidationError("energy must be finite and > 0 (scattering energies only)");
  }
}

namespace {

// Below this |q|*|len| the 4th-order Taylor branch is used.
constexpr double kTaylorThreshold = 1e-4;

}  // namespace

CellPropagator cell_propagator(double q2, double len) {
  const double q = std::sqrt(std::abs(q2));
  const double x = q * std::abs(len);
  if (x < kTaylorThreshold) {
    const double y = q2 * len * len;
    return {1.0 - y / 2.0 + y * y / 24.0, len * (1.0 - y / 6.0 + y * y / 120.0), q2};
  }
  if (q2 > 0.0) return {std::cos(q * len), std::sin(q * len) / q, q2};
  if (x > kMaxEvanescentExponent) {
    throw NumericalError("evanescent exponent kappa*width = " + std::to_string(x) +
                         " exceeds " + std::to_string(kMaxEvanescentExponent));
  }
  return {std::cosh(q * len), std::sinh(q * len) / q, q2};
}

CellIntegrals cell_integrals(double q2, double len) {
  const double L = len;
  const double w = q2 * L * L;
  if (std::abs(w) < 1.0) {
    // Entire in q2: with y = -4 q2 L^2,
    //   cc = L/2 (1 + sum y^m/(2m+1)!),  cs = L^2 sum y^m/(2m+2)!,
    //   ss = 2 L^3 sum y^m/(2m+3)!
    const double y = -4.0 * w;
    double t1 = 1.0, t2 = 0.5, t3 = 1.0 / 6.0;  // y^m / (2m+1)!, (2m+2)!, (2m+3)!
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (int m = 0; m < 40; ++m) {
      s1 += t1;
      s2 += t2;
      s3 += t3;
      if (std::abs(t1) < 1e-18 * std::abs(s1) && std::abs(t3) < 1e-18 * std::abs(s3)) break;
      const double n = 2.0 * m;
      t1 *= y / ((n + 2.0) * (n + 3.0));
      t2 *= y / ((n + 3.0) * (n + 4.0));
      t3 *= y / ((n + 4.0) * (n + 5.0));
    }
    return {0.5 * L * (1.0 + s1), L * L * s2, 2.0 * L * L * L * s3};
  }
  const double q = std::sqrt(std::abs(q2));
  if (q2 > 0.0) {
    const double sn = std::sin(q * L);
    const double s2 = std::sin(2.0 * q * L) / (4.0 * q);
    return {0.5 * L + s2, sn * sn / (2.0 * q2), (0.5 * L - s2) / q2};
  }
  if (q * L > kMaxEvanescentExponent) {
    throw NumericalError("evanescent exponent exceeds limit in cell integral");
  }
  const double sh = std::sinh(q * L);
  const double s2 = std::sinh(2.0 * q * L) / (4.0 * q);
  return {0.5 * L + s2, sh * sh / (2.0 * q * q), (s2 - 0.5 * L) / (q * q)};
}

}  // namespace detail

namespace {

// SU(1,1) form of W(x1)^{-1} P W(x0), where W(x) maps plane-wave coefficients
// to (psi, psi') at x and P is the real cell propagator.
Monodromy slab_from_propagator(const detail::CellPropagator& p, double k, double x_left,
                               double width, double v) {
  const cplx i{0.0, 1.0};
  const double x_right = x_left + width;
  const cplx alpha = std::exp(-i * (k * width)) * (p.c + 0.5 * i * (k + p.q2 / k) * p.s);
  const cplx beta = std::exp(-i * (k * (x_left + x_right))) * (-0.5 * i * (v / k) * p.s);
  return {alpha, beta};
}

void require_finite(const Monodromy& m) {
  if (!std::isfinite(m.alpha.real()) || !std::isfinite(m.alpha.imag()) ||
      !std::isfinite(m.beta.real()) || !std::isfinite(m.beta.imag())) {
    throw NumericalError("monodromy overflowed double precision");
  }
}

}  // namespace

Monodromy compose(const Monodromy& left, const Monodromy& right) noexcept {
  return {right.alpha * left.alpha + right.beta * std::conj(left.beta),
          right.alpha * left.beta + right.beta * std::conj(left.alpha)};
}

Monodromy slab_monodromy(double energy, double v, double width, double x_left) {
  detail::require_scattering_energy(energy);
  if (!(width > 0.0)) throw ValidationError("slab width must be > 0");
  if (!std::isfinite(v)) throw ValidationError("slab potential must be finite");
  // a free cell leaves the plane-wave coefficients untouched; keep it exact
  if (v == 0.0) return Monodromy::identity();
  const double k = std::sqrt(energy);
  return slab_from_propagator(detail::cell_propagator(energy - v, width), k, x_left, width, v);
}

Monodromy slab_monodromy(double energy, double v, double width) {
  return slab_monodromy(energy, v, width, -0.5 * width);
}

Monodromy monodromy(const PotentialSpec& spec, double energy) {
  validate(spec);
  detail::require_scattering_energy(energy);
  Monodromy m;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double x0 = spec.cell_left(j);
    const double w = spec.cell_right(j) - x0;
    m = compose(m, slab_monodromy(energy, spec.cells[j], w, x0));
  }
  require_finite(m);
  return m;
}

ScatteringAmplitudes amplitudes(const Monodromy& m, double energy) {
  detail::require_scattering_energy(energy);
  ScatteringAmplitudes s;
  s.energy = energy;
  s.k = std::sqrt(energy);
  // Left incidence: (B, 0) = M (1, A).
  s.A = -m.m21() / m.m22();
  s.B = m.m11() + m.m12() * s.A;
  // Right incidence: (C, 1) = M (0, D).
  s.D = 1.0 / m.m22();
  s.C = m.m12() * s.D;
  s.T = 1.0 / std::norm(m.m22());
  s.R = std::norm(s.A);
  return s;
}

Solution solve(const PotentialSpec& spec, double energy) {
  const Monodromy m = monodromy(spec, energy);
  return {m, amplitudes(m, energy)};
}

double transmission(const PotentialSpec& spec, double energy) {
  return 1.0 / std::norm(monodromy(spec, energy).alpha);
}

std::vector<double> transmission_sweep(const PotentialSpec& spec,
                                       const std::vector<double>& energies) {
  validate(spec);
  for (double e : energies) detail::require_scattering_energy(e);
  const std::size_t n = energies.size();
  std::vector<cplx> acc_alpha(n, cplx{1.0, 0.0}), acc_beta(n, cplx{0.0, 0.0});
  std::vector<cplx> slab_alpha(n), slab_beta(n);
  const auto& kern = simd::kernels();
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double x0 = spec.cell_left(j);
    const double w = spec.cell_right(j) - x0;
    for (std::size_t i = 0; i < n; ++i) {
      const Monodromy s = slab_monodromy(energies[i], spec.cells[j], w, x0);
      slab_alpha[i] = s.alpha;
      slab_beta[i] = s.beta;
    }
    kern.su11_compose(slab_alpha.data(), slab_beta.data(), acc_alpha.data(), acc_beta.data(), n);
  }
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    require_finite({acc_alpha[i], acc_beta[i]});
    t[i] = 1.0 / std::norm(acc_alpha[i]);
  }
  return t;
}

WaveField wavefields(const PotentialSpec& spec, double energy, std::size_t samples_per_cell) {
  if (samples_per_cell == 0) throw ValidationError("samples_per_cell must be >= 1");
  const Solution sol = solve(spec, energy);
  const std::size_t n = spec.size();
  const std::size_t spc = samples_per_cell;
  const double k = sol.amplitudes.k;
  const double a = spec.half_width;
  const cplx i{0.0, 1.0};

  WaveField f;
  f.energy = energy;
  f.samples_per_cell = spc;
  f.amplitudes = sol.amplitudes;
  f.grid.resize(n * spc + 1);
  f.psi1.resize(n * spc + 1);
  f.psi2.resize(n * spc + 1);
  f.boundary1.resize(n + 1);
  f.boundary2.resize(n + 1);

  const cplx eR = std::exp(i * (k * a));
  // Psi1 = B e^{ikx} at x = +a; Psi2 = D e^{-ikx} at x = -a.
  f.boundary1[n] = {sol.amplitudes.B * eR, i * k * sol.amplitudes.B * eR};
  f.boundary2[0] = {sol.amplitudes.D * eR, -i * k * sol.amplitudes.D * eR};

  std::vector<double> c(spc), s(spc);
  const auto& kern = simd::kernels();

  for (std::size_t jj = n; jj-- > 0;) {
    const double x0 = spec.cell_left(jj);
    const double w = spec.cell_right(jj) - x0;
    const double q2 = energy - spec.cells[jj];
    for (std::size_t m = 0; m < spc; ++m) {
      // sample m sits at x0 + m*h, i.e. (spc - m)*h left of the cell's right edge
      const auto p = detail::cell_propagator(q2, -w * static_cast<double>(spc - m) / spc);
      c[m] = p.c;
      s[m] = p.s;
    }
    const State& right = f.boundary1[jj + 1];
    kern.real_combination(c.data(), s.data(), right.psi, right.dpsi, f.psi1.data() + jj * spc, spc);
    f.boundary1[jj] = detail::cell_propagator(q2, -w).apply(right);
  }
  f.psi1[n * spc] = f.boundary1[n].psi;

  for (std::size_t j = 0; j < n; ++j) {
    const double x0 = spec.cell_left(j);
    const double w = spec.cell_right(j) - x0;
    const double q2 = energy - spec.cells[j];
    for (std::size_t m = 0; m < spc; ++m) {
      const auto p = detail::cell_propagator(q2, w * static_cast<double>(m) / spc);
      c[m] = p.c;
      s[m] = p.s;
      f.grid[j * spc + m] = x0 + w * static_cast<double>(m) / spc;
    }
    const State& left = f.boundary2[j];
    kern.real_combination(c.data(), s.data(), left.psi, left.dpsi, f.psi2.data() + j * spc, spc);
    f.boundary2[j + 1] = detail::cell_propagator(q2, w).apply(left);
  }
  f.psi2[n * spc] = f.boundary2[n].psi;
  f.grid[n * spc] = a;
  return f;
}

}  // namespace qtrans
