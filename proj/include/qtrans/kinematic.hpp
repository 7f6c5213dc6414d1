#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qtrans/scattering.hpp"

namespace qtrans {

/// Coordinates (z, phi) on SU(1,1):
///   M = [[sqrt(1+|z|^2) e^{i phi}, z], [conj(z), sqrt(1+|z|^2) e^{-i phi}]]
struct KinematicPoint {
  cplx z;
  double phi = 0.0;  // in [0, 2*pi)
};

/// Transmission as a function of the monodromy alone: 1 / (1 + |beta|^2).
double kinematic_T(const Monodromy& m) noexcept;

/// dT/d|z| = -2|z| / (1 + |z|^2)^2
double kinematic_radial_derivative(double abs_z) noexcept;

/// phi = arg(alpha) wrapped to [0, 2*pi), z = beta.
KinematicPoint decompose(const Monodromy& m) noexcept;
Monodromy reconstruct(const KinematicPoint& p) noexcept;

double wrap_angle(double phi) noexcept;

struct KinematicSample {
  double abs_z;
  double phi;
  double T;
  double dT_dr;
};

/// n points (z, phi): the first is always z = 0, the rest uniform in the disk
/// |z| <= radius with uniform phi. Sorted by |z| (ties keep generation order).
std::vector<KinematicSample> kinematic_scan(std::size_t n, double radius, std::uint64_t seed);

}  // namespace qtrans
