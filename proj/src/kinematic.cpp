#include "qtrans/kinematic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qtrans/error.hpp"
#include "qtrans/rng.hpp"

namespace qtrans {

double kinematic_T(const Monodromy& m) noexcept { return 1.0 / (1.0 + std::norm(m.beta)); }

double kinematic_radial_derivative(double abs_z) noexcept {
  const double d = 1.0 + abs_z * abs_z;
  return -2.0 * abs_z / (d * d);
}

double wrap_angle(double phi) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(phi, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

KinematicPoint decompose(const Monodromy& m) noexcept {
  return {m.beta, wrap_angle(std::arg(m.alpha))};
}

Monodromy reconstruct(const KinematicPoint& p) noexcept {
  return {std::polar(std::sqrt(1.0 + std::norm(p.z)), p.phi), p.z};
}

std::vector<KinematicSample> kinematic_scan(std::size_t n, double radius, std::uint64_t seed) {
  if (n == 0) throw ValidationError("kinematic_scan: n must be >= 1");
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw ValidationError("kinematic_scan: radius must be finite and >= 0");
  }
  Rng rng(seed);
  std::vector<KinematicSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0, theta = 0.0, phi = 0.0;
    if (i > 0) {
      r = radius * std::sqrt(rng.uniform());
      theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    const Monodromy m = reconstruct({std::polar(r, theta), wrap_angle(phi)});
    const double abs_z = std::abs(m.beta);
    out.push_back({abs_z, wrap_angle(phi), kinematic_T(m), kinematic_radial_derivative(abs_z)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const KinematicSample& a, const KinematicSample& b) { return a.abs_z < b.abs_z; });
  return out;
}

}  // namespace qtrans
