#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qtrans/potential.hpp"

namespace qtrans {

using cplx = std::complex<double>;

/// Transfer matrix M = [[alpha, beta], [conj(beta), conj(alpha)]] in SU(1,1).
///
/// Acts on plane-wave coefficients against e^{+ikx}, e^{-ikx} (right mover
/// first, anchored at x = 0): (A', A) on the left of a region maps to (B, B')
/// on its right.
struct Monodromy {
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};

  static Monodromy identity() noexcept { return {}; }

  cplx m11() const noexcept { return alpha; }
  cplx m12() const noexcept { return beta; }
  cplx m21() const noexcept { return std::conj(beta); }
  cplx m22() const noexcept { return std::conj(alpha); }

  /// |alpha|^2 - |beta|^2, which is det M.
  double determinant() const noexcept { return std::norm(alpha) - std::norm(beta); }
};

/// Product `right * left`: first traverse `left`, then `right`.
Monodromy compose(const Monodromy& left, const Monodromy& right) noexcept;

/// Scattering data at one energy. A, B: left incidence (reflection,
/// transmission); C, D: right incidence.
struct ScatteringAmplitudes {
  double energy = 0.0;
  double k = 0.0;
  cplx A, B, C, D;
  double T = 0.0;  // |B|^2
  double R = 0.0;  // |A|^2
};

struct Solution {
  Monodromy monodromy;
  ScatteringAmplitudes amplitudes;
};

/// Exact transfer matrix of a constant slab of height v on [x_left, x_left + width].
/// The default places the slab symmetrically about the origin. Throws
/// ValidationError for energy <= 0 or width <= 0, NumericalError when the
/// evanescent exponent kappa*width exceeds kMaxEvanescentExponent.
Monodromy slab_monodromy(double energy, double v, double width, double x_left);
Monodromy slab_monodromy(double energy, double v, double width);

inline constexpr double kMaxEvanescentExponent = 350.0;

/// Monodromy of the whole potential (cells composed left to right).
Monodromy monodromy(const PotentialSpec& spec, double energy);

/// Amplitudes from a monodromy at the given energy.
ScatteringAmplitudes amplitudes(const Monodromy& m, double energy);

Solution solve(const PotentialSpec& spec, double energy);

/// |B|^2 only; the hot path for finite differences and line searches.
double transmission(const PotentialSpec& spec, double energy);

/// T(E) for many energies, composed in batches through the SIMD kernel layer.
std::vector<double> transmission_sweep(const PotentialSpec& spec, const std::vector<double>& energies);

/// Value and derivative of a solution at one point.
struct State {
  cplx psi;
  cplx dpsi;
};

/// Ψ⁰₁ (left incidence) and Ψ⁰₂ (right incidence) sampled on [-a, a].
///
/// grid has samples_per_cell * N + 1 points; cell j owns grid indices
/// [j*samples_per_cell, (j+1)*samples_per_cell]. boundary1/boundary2 hold the
/// exact (psi, psi') at the N + 1 cell edges.
struct WaveField {
  double energy = 0.0;
  std::size_t samples_per_cell = 0;
  std::vector<double> grid;
  std::vector<cplx> psi1;
  std::vector<cplx> psi2;
  std::vector<State> boundary1;
  std::vector<State> boundary2;
  ScatteringAmplitudes amplitudes;
};

/// Ψ⁰₁ is propagated right-to-left from B e^{ikx}, Ψ⁰₂ left-to-right from
/// D e^{-ikx}; both directions are the ones in which the physical solution
/// grows through evanescent cells.
WaveField wavefields(const PotentialSpec& spec, double energy, std::size_t samples_per_cell);

namespace detail {

/// Real propagator of (psi, psi') across a constant cell of length len with
/// q2 = E - v:  [[c, s], [-q2*s, c]],  c = cos(qL), s = sin(qL)/q.
struct CellPropagator {
  double c;
  double s;
  double q2;
  State apply(const State& u) const noexcept {
    return {c * u.psi + s * u.dpsi, -q2 * s * u.psi + c * u.dpsi};
  }
};

/// Handles the oscillatory, evanescent (hyperbolic) and |q|L -> 0 (Taylor)
/// branches. len may be negative (backward propagation).
CellPropagator cell_propagator(double q2, double len);

/// Integrals over s in [0, L] of c(s)^2, c(s)s(s), s(s)^2 for the same
/// functions as cell_propagator.
struct CellIntegrals {
  double cc;
  double cs;
  double ss;
};
CellIntegrals cell_integrals(double q2, double len);

void require_scattering_energy(double energy);

}  // namespace detail

}  // namespace qtrans
