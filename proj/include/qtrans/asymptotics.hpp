#pragma once

#include <complex>
#include <vector>

namespace qtrans {

using cplx = std::complex<double>;

/// Phase S(E_f) with k(E) = sqrt(E):
///   Forward:  S = k(E_f) - k(E_i), S'(E_i) > 0
///   Backward: S = -k(E_f) - k(E_i), S'(E_i) < 0
enum class PhaseBranch { Forward, Backward };

/// I(x, eta) = integral over the window of e^{i x S(E)} f(E) / (E - E_i - i eta) dE
/// with the Gaussian profile f(E) = amplitude * exp(-(E - E_i)^2 / (2 sigma^2))
/// and the window [E_i - m sigma, E_i + m sigma], m = window_sigmas.
///
/// eta = 0 selects the eta -> 0+ limit, evaluated through
/// 1/(t - i0) = PV(1/t) + i pi delta(t).
struct PhaseIntegralCase {
  double center_energy = 1.0;
  double sigma = 0.05;
  PhaseBranch branch = PhaseBranch::Forward;
  double x = 200.0;
  double eta = 1e-4;
  double amplitude = 1.0;
  double window_sigmas = 8.0;
};

void validate(const PhaseIntegralCase& c);

double phase(const PhaseIntegralCase& c, double energy) noexcept;
double profile(const PhaseIntegralCase& c, double energy) noexcept;

/// Adaptive Gauss-Kronrod; throws NumericalError with the achieved error
/// estimate if it exceeds abs_tol.
cplx phase_integral(const PhaseIntegralCase& c, double abs_tol = 1e-10);

/// i pi [1 + sgn S'(E_i)] f(E_i) e^{i x S(E_i)}
cplx stationary_phase_limit(const PhaseIntegralCase& c) noexcept;

/// |I - limit| / (2 pi |f(E_i)|); for the Backward branch the limit is 0.
double stationary_phase_error(const PhaseIntegralCase& c, cplx value) noexcept;

struct SweepRow {
  double x;
  double eta;
  cplx value;
  double rel_error;
  bool regularization_dominates;  // eta >= sigma
};

/// Rows ordered x-major. x_list must be strictly increasing and eta_list
/// strictly decreasing.
std::vector<SweepRow> convergence_sweep(const PhaseIntegralCase& base, const std::vector<double>& x_list,
                                        const std::vector<double>& eta_list);

}  // namespace qtrans
