#include "qtrans/gradient.hpp"

#include <algorithm>
#include <cmath>

#include "qtrans/error.hpp"
#include "qtrans/simd/kernels.hpp"

namespace qtrans {

double GradientKernel::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

GradientKernel analytic_gradient(const PotentialSpec& spec, double energy,
                                 std::size_t samples_per_cell, CellQuadrature quadrature) {
  const WaveField f = wavefields(spec, energy, samples_per_cell);
  const ScatteringAmplitudes& amp = f.amplitudes;
  const std::size_t n = spec.size();

  const cplx weight = std::conj(amp.A) / std::conj(amp.B);
  const double scale = -amp.T / amp.k;

  GradientKernel g;
  g.energy = energy;
  g.grid = f.grid;
  g.T = amp.T;
  g.abs_A = std::abs(amp.A);
  g.values.resize(f.grid.size());
  simd::im_conj_product(f.psi2, f.psi1, weight, scale, g.values);

  g.cell_gradient.resize(n);
  switch (quadrature) {
    case CellQuadrature::Trapezoid:
      simd::kernels().panel_trapezoid(g.values.data(), n, samples_per_cell,
                                      spec.cell_width() / static_cast<double>(samples_per_cell),
                                      g.cell_gradient.data());
      break;
    case CellQuadrature::Analytic:
      for (std::size_t j = 0; j < n; ++j) {
        // psi(x0 + s) = psi(x0) c(s) + psi'(x0) s(s) for both solutions
        const State& u1 = f.boundary1[j];
        const State& u2 = f.boundary2[j];
        const auto ints = detail::cell_integrals(energy - spec.cells[j],
                                                 spec.cell_right(j) - spec.cell_left(j));
        const cplx overlap = std::conj(u2.psi) * u1.psi * ints.cc +
                             (std::conj(u2.psi) * u1.dpsi + std::conj(u2.dpsi) * u1.psi) * ints.cs +
                             std::conj(u2.dpsi) * u1.dpsi * ints.ss;
        g.cell_gradient[j] = scale * (overlap * weight).imag();
      }
      break;
  }
  return g;
}

std::vector<double> fd_gradient(const PotentialSpec& spec, double energy, double h) {
  validate(spec);
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("fd step h must be > 0");
  std::vector<double> grad(spec.size());
  PotentialSpec work = spec;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    work.cells[j] = spec.cells[j] + h;
    const double tp = transmission(work, energy);
    work.cells[j] = spec.cells[j] - h;
    const double tm = transmission(work, energy);
    work.cells[j] = spec.cells[j];
    grad[j] = (tp - tm) / (2.0 * h);
  }
  return grad;
}

GradientComparison compare_gradients(const std::vector<double>& candidate,
                                     const std::vector<double>& reference) {
  if (candidate.size() != reference.size()) {
    throw ValidationError("compare_gradients: size mismatch");
  }
  const double na = std::sqrt(simd::dot(candidate, candidate));
  const double nb = std::sqrt(simd::dot(reference, reference));
  std::vector<double> diff(candidate.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = candidate[i] - reference[i];
  const double nd = std::sqrt(simd::dot(diff, diff));

  GradientComparison c;
  if (na <= kNegligibleGradient && nb <= kNegligibleGradient) {
    c.trivial = true;
    c.cosine = 1.0;
    c.rel_l2 = nd;
    return c;
  }
  c.cosine = (na > 0.0 && nb > 0.0) ? simd::dot(candidate, reference) / (na * nb) : 0.0;
  c.rel_l2 = nb > 0.0 ? nd / nb : nd;
  return c;
}

CriticalityReport criticality_test(const PotentialSpec& spec, double energy, double tol,
                                   std::size_t samples_per_cell) {
  if (!(tol > 0.0)) throw ValidationError("criticality tolerance must be > 0");
  const GradientKernel g = analytic_gradient(spec, energy, samples_per_cell);
  CriticalityReport r;
  r.max_abs_g = g.max_abs();
  r.critical = r.max_abs_g <= tol;
  r.T = g.T;
  r.abs_A = g.abs_A;
  return r;
}

}  // namespace qtrans
