#pragma once

#include <cstddef>
#include <vector>

#include "qtrans/potential.hpp"
#include "qtrans/scattering.hpp"

namespace qtrans {

inline constexpr std::size_t kDefaultSamplesPerCell = 32;

/// How the per-cell derivative dT/dV_j is obtained from the kernel g(x).
enum class CellQuadrature {
  Analytic,   // closed-form integral of the cell's local solutions
  Trapezoid,  // composite trapezoid of the sampled g(x)
};

/// Functional derivative g(x) = dT/dV(x) sampled on the WaveField grid:
///
///   g(x) = -(T/k) Im[ conj(Psi2(x)) Psi1(x) conj(A)/conj(B) ]
///
/// with plane-wave-normalized Psi1, Psi2. cell_gradient[j] = integral of g
/// over cell j = dT/dV_j.
struct GradientKernel {
  double energy = 0.0;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> cell_gradient;
  double T = 0.0;
  double abs_A = 0.0;

  double max_abs() const noexcept;
};

GradientKernel analytic_gradient(const PotentialSpec& spec, double energy,
                                 std::size_t samples_per_cell = kDefaultSamplesPerCell,
                                 CellQuadrature quadrature = CellQuadrature::Analytic);

/// Central differences (T(V + h e_j) - T(V - h e_j)) / 2h per cell.
std::vector<double> fd_gradient(const PotentialSpec& spec, double energy, double h);

struct GradientComparison {
  double cosine = 1.0;
  double rel_l2 = 0.0;
  // Both vectors below kNegligibleGradient in norm: direction is meaningless
  // and the check passes trivially.
  bool trivial = false;
};

inline constexpr double kNegligibleGradient = 1e-8;

/// Compares `candidate` against `reference` (the FD oracle).
GradientComparison compare_gradients(const std::vector<double>& candidate,
                                     const std::vector<double>& reference);

struct CriticalityReport {
  bool critical = false;
  double T = 0.0;
  double abs_A = 0.0;
  double max_abs_g = 0.0;
};

/// critical := max |g(x)| <= tol on the sampled grid.
CriticalityReport criticality_test(const PotentialSpec& spec, double energy, double tol,
                                   std::size_t samples_per_cell = kDefaultSamplesPerCell);

}  // namespace qtrans
