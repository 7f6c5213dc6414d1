#include "qtrans/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <queue>
#include <string>


#include "qtrans/error.hpp"

namespace qtrans {

namespace {

constexpr double kPi = std::numbers::pi;

double sgn_slope(PhaseBranch b) noexcept { return b == PhaseBranch::Forward ? 1.0 : -1.0; }

// Global adaptive Gauss-Kronrod (7/15) over a set of initial panels. The
// error estimate is the plain |K15 - G7| per interval, summed.
class AdaptiveGaussKronrod {
 public:
  template <class F>
  cplx integrate(F&& f, const std::vector<double>& edges, double abs_tol, double* error) {
    std::priority_queue<Interval> heap;
    cplx total{0.0, 0.0};
    double err = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      Interval iv = rule(f, edges[k], edges[k + 1]);
      total += iv.value;
      err += iv.error;
      heap.push(iv);
    }
    for (int it = 0; it < kMaxSubdivisions && err > abs_tol && !heap.empty(); ++it) {
      const Interval worst = heap.top();
      heap.pop();
      const double mid = 0.5 * (worst.a + worst.b);
      const Interval left = rule(f, worst.a, mid);
      const Interval right = rule(f, mid, worst.b);
      total += left.value + right.value - worst.value;
      err += left.error + right.error - worst.error;
      heap.push(left);
      heap.push(right);
    }
    // Re-sum to shed the drift of the running totals.
    total = {0.0, 0.0};
    err = 0.0;
    for (; !heap.empty(); heap.pop()) {
      total += heap.top().value;
      err += heap.top().error;
    }
    *error = err;
    return total;
  }

 private:
  static constexpr int kMaxSubdivisions = 20000;

  struct Interval {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Interval& o) const { return error < o.error; }
  };

  template <class F>
  static Interval rule(F& f, double a, double b) {
    static constexpr double xk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static constexpr double wk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx kron = wk[7] * fc;
    cplx gauss = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
      const cplx pair = f(c - h * xk[j]) + f(c + h * xk[j]);
      kron += wk[j] * pair;
      if (j % 2 == 1) gauss += wg[j / 2] * pair;
    }
    return {a, b, h * kron, std::abs(h * (kron - gauss))};
  }
};

// Panel edges on [0, w]: geometric near 0 to resolve the eta-wide peak, then
// no wider than half an oscillation period.
std::vector<double> panel_edges(double w, double eta, double max_panel) {
  std::vector<double> edges{0.0};
  if (eta > 0.0) {
    for (double e = eta; e < w && e < max_panel; e *= 4.0) edges.push_back(e);
  }
  double last = edges.back();
  const auto n = static_cast<int>(std::ceil((w - last) / max_panel));
  for (int i = 1; i <= n; ++i) edges.push_back(last + (w - last) * i / n);
  return edges;
}

}  // namespace

void validate(const PhaseIntegralCase& c) {
  if (!(c.center_energy > 0.0)) throw ValidationError("phase integral: E_i must be > 0");
  if (!(c.sigma > 0.0)) throw ValidationError("phase integral: sigma must be > 0");
  if (!(c.eta >= 0.0) || !std::isfinite(c.eta)) throw ValidationError("phase integral: eta must be >= 0");
  if (!(c.x > 0.0) || !std::isfinite(c.x)) throw ValidationError("phase integral: x must be > 0");
  if (!(c.window_sigmas >= 5.0)) throw ValidationError("phase integral: window margin must be >= 5 sigma");
  if (!(c.center_energy - c.window_sigmas * c.sigma > 0.0)) {
    throw ValidationError("phase integral: window must lie in E > 0");
  }
  if (!std::isfinite(c.amplitude)) throw ValidationError("phase integral: amplitude must be finite");
}

double phase(const PhaseIntegralCase& c, double energy) noexcept {
  const double ki = std::sqrt(c.center_energy);
  const double kf = std::sqrt(energy);
  return c.branch == PhaseBranch::Forward ? kf - ki : -kf - ki;
}

double profile(const PhaseIntegralCase& c, double energy) noexcept {
  const double d = (energy - c.center_energy) / c.sigma;
  return c.amplitude * std::exp(-0.5 * d * d);
}

cplx phase_integral(const PhaseIntegralCase& c, double abs_tol) {
  validate(c);
  if (c.amplitude == 0.0) return {0.0, 0.0};

  const double ei = c.center_energy;
  const double w = c.window_sigmas * c.sigma;
  const cplx i{0.0, 1.0};
  auto h = [&](double e) { return std::exp(i * (c.x * phase(c, e))) * profile(c, e); };

  // |S'(E)| = 1/(2 sqrt(E)) is largest at the window's low edge.
  const double max_slope = 0.5 / std::sqrt(ei - w);
  const double max_panel = std::min(w, kPi / (c.x * max_slope));

  const auto edges = panel_edges(w, c.eta, max_panel);
  double error = 0.0;
  cplx value;
  AdaptiveGaussKronrod quad;
  if (c.eta > 0.0) {
    const double eta = c.eta;
    // Fold t and -t: h(+)/(t - i eta) - h(-)/(t + i eta)
    //            = [t (h(+) - h(-)) + i eta (h(+) + h(-))] / (t^2 + eta^2)
    auto folded = [&](double t) {
      const cplx hp = h(ei + t), hm = h(ei - t);
      return (t * (hp - hm) + i * eta * (hp + hm)) / (t * t + eta * eta);
    };
    value = quad.integrate(folded, edges, abs_tol, &error);
  } else {
    auto principal = [&](double t) { return (h(ei + t) - h(ei - t)) / t; };
    value = quad.integrate(principal, edges, abs_tol, &error) + i * kPi * h(ei);
  }
  if (!(error <= abs_tol) || !std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "phase integral quadrature did not converge: achieved error estimate %.3e > %.3e",
                  error, abs_tol);
    throw NumericalError(msg);
  }
  return value;
}

cplx stationary_phase_limit(const PhaseIntegralCase& c) noexcept {
  const cplx i{0.0, 1.0};
  const double ei = c.center_energy;
  return i * kPi * (1.0 + sgn_slope(c.branch)) * profile(c, ei) * std::exp(i * (c.x * phase(c, ei)));
}

double stationary_phase_error(const PhaseIntegralCase& c, cplx value) noexcept {
  return std::abs(value - stationary_phase_limit(c)) / (2.0 * kPi * std::abs(profile(c, c.center_energy)));
}

std::vector<SweepRow> convergence_sweep(const PhaseIntegralCase& base, const std::vector<double>& x_list,
                                        const std::vector<double>& eta_list) {
  if (x_list.empty() || eta_list.empty()) throw ValidationError("convergence_sweep: empty list");
  for (std::size_t k = 1; k < x_list.size(); ++k) {
    if (!(x_list[k] > x_list[k - 1])) throw ValidationError("convergence_sweep: x_list must increase");
  }
  for (std::size_t k = 1; k < eta_list.size(); ++k) {
    if (!(eta_list[k] < eta_list[k - 1])) throw ValidationError("convergence_sweep: eta_list must decrease");
  }
  std::vector<SweepRow> rows;
  rows.reserve(x_list.size() * eta_list.size());
  for (double x : x_list) {
    for (double eta : eta_list) {
      PhaseIntegralCase c = base;
      c.x = x;
      c.eta = eta;
      const cplx v = phase_integral(c);
      rows.push_back({x, eta, v, stationary_phase_error(c, v), eta >= c.sigma});
    }
  }
  return rows;
}

}  // namespace qtrans
