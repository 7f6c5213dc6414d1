#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qtrans/error.hpp"
#include "qtrans/rng.hpp"
#include "qtrans/scattering.hpp"

using namespace qtrans;
using std::numbers::pi;

namespace {

double max_elem_diff(const Monodromy& a, const Monodromy& b) {
  return std::max(std::abs(a.alpha - b.alpha), std::abs(a.beta - b.beta));
}

PotentialSpec random_spec(Rng& rng, std::size_t n, double amp) {
  PotentialSpec s{rng.uniform(0.3, 1.5), std::vector<double>(n)};
  for (double& v : s.cells) v = rng.uniform(-amp, amp);
  return s;
}

}  // namespace

TEST_CASE("zero slab is the identity") {
  const Monodromy m = slab_monodromy(1.0, 0.0, 0.5);
  CHECK(std::abs(m.beta) == 0.0);
  CHECK(m.alpha == cplx{1.0, 0.0});
}

TEST_CASE("square barrier slab reproduces the closed form") {
  const double T_exact = oracle::square_barrier_T(2.0, 1.0, 1.0);
  CHECK(T_exact == doctest::Approx(0.4199).epsilon(1e-4));
  const Monodromy m = slab_monodromy(1.0, 2.0, 1.0);
  CHECK(oracle::rel_diff(1.0 / std::norm(m.alpha), T_exact) < 1e-12);
  CHECK(std::abs(m.determinant() - 1.0) < 1e-12);
}

TEST_CASE("q -> 0 Taylor branch matches the perturbed exact branch") {
  const Monodromy degenerate = slab_monodromy(1.0, 1.0, 1.0);
  const Monodromy perturbed = slab_monodromy(1.0, 1.0 - 1e-12, 1.0);
  const Monodromy perturbed_below = slab_monodromy(1.0, 1.0 + 1e-12, 1.0);
  CHECK(max_elem_diff(degenerate, perturbed) < 1e-10);
  CHECK(max_elem_diff(degenerate, perturbed_below) < 1e-10);
  // just above / below the branch switch |q| L = 1e-4
  const Monodromy lo = slab_monodromy(1.0, 1.0 - 0.99e-8, 1.0);
  const Monodromy hi = slab_monodromy(1.0, 1.0 - 1.01e-8, 1.0);
  CHECK(max_elem_diff(lo, hi) < 1e-9);
  CHECK(std::abs(degenerate.determinant() - 1.0) < 1e-14);
}

TEST_CASE("slab preconditions") {
  CHECK_THROWS_AS(slab_monodromy(0.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(slab_monodromy(-1.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(slab_monodromy(1.0, 1.0, 0.0), ValidationError);
  // kappa * width = sqrt(1e6 - 1) * 1 > 350
  CHECK_THROWS_AS(slab_monodromy(1.0, 1e6, 1.0), NumericalError);
  CHECK_NOTHROW(slab_monodromy(1.0, 1.0 + 340.0 * 340.0, 1.0));
}

TEST_CASE("compose") {
  const Monodromy m = slab_monodromy(2.0, 3.0, 0.7, -0.2);
  CHECK(max_elem_diff(compose(m, Monodromy::identity()), m) == 0.0);
  CHECK(max_elem_diff(compose(Monodromy::identity(), m), m) == 0.0);

  SUBCASE("splitting a barrier into 8 cells leaves the monodromy unchanged") {
    for (double E : {0.5, 1.0, 3.0, 7.0}) {
      const Monodromy one = monodromy(square_barrier(2.0, 1.0, 1), E);
      const Monodromy eight = monodromy(square_barrier(2.0, 1.0, 8), E);
      CHECK(max_elem_diff(one, eight) < 1e-12);
    }
  }
  SUBCASE("SU(1,1) is closed under 100 random slab products") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      Monodromy acc;
      double x = -1.0;
      const double E = rng.uniform(0.5, 5.0);
      for (int s = 0; s < 100; ++s) {
        const double w = rng.uniform(0.001, 0.02);
        acc = compose(acc, slab_monodromy(E, rng.uniform(-3.0, 3.0), w, x));
        x += w;
      }
      CHECK(std::abs(acc.determinant() - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("solve") {
  SUBCASE("free potential transmits fully at every energy") {
    for (double E : {1e-3, 0.3, 1.0, 10.0, 1e3}) {
      const auto s = solve(free_potential(5), E).amplitudes;
      CHECK(s.T == 1.0);
      CHECK(std::abs(s.A) == 0.0);
    }
  }
  SUBCASE("square barrier") {
    const auto s = solve(square_barrier(2.0, 1.0), 1.0).amplitudes;
    CHECK(oracle::rel_diff(s.T, oracle::square_barrier_T(2.0, 1.0, 1.0)) < 1e-10);
  }
  SUBCASE("transmission resonance") {
    const auto s = solve(square_barrier(1.0, 1.0), 1.0 + pi * pi).amplitudes;
    CHECK(std::abs(s.T - 1.0) < 1e-10);
  }
  SUBCASE("closed form at 20 energies on both sides of the barrier top") {
    for (int i = 0; i < 20; ++i) {
      const double E = 0.25 + (8.0 - 0.25) * i / 19.0;
      const double T = transmission(square_barrier(2.0, 1.0, 3), E);
      CHECK(oracle::rel_diff(T, oracle::square_barrier_T(2.0, 1.0, E)) < 1e-10);
    }
    CHECK(oracle::rel_diff(transmission(square_barrier(2.0, 1.0), 2.0), oracle::square_barrier_T(2.0, 1.0, 2.0)) <
          1e-10);
  }
  SUBCASE("amplitudes agree with direct RK4 integration of the ODE") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
      const auto spec = random_spec(rng, 4, 3.0);
      const double E = rng.uniform(0.5, 5.0);
      const auto s = solve(spec, E).amplitudes;
      const auto ode = oracle::rk4_amplitudes(spec, E, 4000);
      CHECK(std::abs(s.A - ode.A) < 1e-9);
      CHECK(std::abs(s.B - ode.B) < 1e-9);
    }
  }
  SUBCASE("errors propagate") {
    CHECK_THROWS_AS(solve(free_potential(), 0.0), ValidationError);
    CHECK_THROWS_AS(solve(PotentialSpec{1.0, {}}, 1.0), ValidationError);
  }
}

TEST_CASE("conservation, reciprocity and the C identity on random specs") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = random_spec(rng, 1 + trial % 12, 4.0);
    const double E = rng.uniform(0.2, 6.0);
    const auto [m, s] = solve(spec, E);
    CHECK(std::abs(s.T + s.R - 1.0) < 1e-12);
    CHECK(s.T > 0.0);
    CHECK(s.T <= 1.0 + 1e-15);
    CHECK(std::abs(std::abs(s.D) - std::abs(s.B)) < 1e-12);
    CHECK(std::abs(s.C + s.B * std::conj(s.A) / std::conj(s.B)) < 1e-10);
    CHECK(std::abs(1.0 / std::norm(m.m22()) - s.T) < 1e-14);
  }
}

TEST_CASE("transmission_sweep matches pointwise solves") {
  Rng rng(9);
  const auto spec = random_spec(rng, 6, 3.0);
  std::vector<double> energies;
  for (int i = 0; i < 37; ++i) energies.push_back(0.1 + 0.2 * i);
  const auto T = transmission_sweep(spec, energies);
  REQUIRE(T.size() == energies.size());
  for (std::size_t i = 0; i < T.size(); ++i) CHECK(oracle::rel_diff(T[i], transmission(spec, energies[i])) < 1e-13);
}

TEST_CASE("wavefields") {
  SUBCASE("free particle: psi1 = e^{ix}, psi2 = e^{-ix}") {
    const auto f = wavefields(free_potential(3), 1.0, 16);
    REQUIRE(f.grid.size() == 3 * 16 + 1);
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
      CHECK(std::abs(f.psi1[i] - std::exp(cplx{0.0, f.grid[i]})) < 1e-14);
      CHECK(std::abs(f.psi2[i] - std::exp(cplx{0.0, -f.grid[i]})) < 1e-14);
    }
  }
  SUBCASE("asymptotic forms hold at both edges") {
    Rng rng(21);
    const cplx i{0.0, 1.0};
    for (int trial = 0; trial < 30; ++trial) {
      const auto spec = random_spec(rng, 1 + trial % 9, 3.0);
      const double E = rng.uniform(0.3, 5.0);
      const auto f = wavefields(spec, E, 8);
      const auto& s = f.amplitudes;
      const double a = spec.half_width, k = s.k;
      auto rel = [](cplx got, cplx want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); };
      CHECK(rel(f.psi1.front(), std::exp(-i * k * a) + s.A * std::exp(i * k * a)) < 1e-10);
      CHECK(rel(f.psi1.back(), s.B * std::exp(i * k * a)) < 1e-10);
      CHECK(rel(f.psi2.back(), std::exp(-i * k * a) + s.C * std::exp(i * k * a)) < 1e-10);
      CHECK(rel(f.psi2.front(), s.D * std::exp(i * k * a)) < 1e-10);
      CHECK(f.grid.front() == -a);
      CHECK(f.grid.back() == a);
    }
  }
  SUBCASE("psi and psi' are continuous across cell boundaries") {
    Rng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
      const auto spec = random_spec(rng, 2 + trial % 7, 3.0);
      const double E = rng.uniform(0.3, 5.0);
      const auto f = wavefields(spec, E, 8);
      for (std::size_t j = 0; j + 1 < spec.size(); ++j) {
        // evaluate the right edge of cell j from its left edge, compare with
        // the left edge of cell j + 1 (and the same for Psi1, right to left)
        const double w = spec.cell_right(j) - spec.cell_left(j);
        const double q2 = E - spec.cells[j];
        const State from_left = detail::cell_propagator(q2, w).apply(f.boundary2[j]);
        const State& there = f.boundary2[j + 1];
        const double scale2 = std::abs(there.psi) + std::abs(there.dpsi);
        CHECK(std::abs(from_left.psi - there.psi) < 1e-10 * scale2);
        CHECK(std::abs(from_left.dpsi - there.dpsi) < 1e-10 * scale2);

        const State fwd1 = detail::cell_propagator(q2, w).apply(f.boundary1[j]);
        const State& there1 = f.boundary1[j + 1];
        const double scale1 = std::abs(there1.psi) + std::abs(there1.dpsi);
        CHECK(std::abs(fwd1.psi - there1.psi) < 1e-10 * scale1);
        CHECK(std::abs(fwd1.dpsi - there1.dpsi) < 1e-10 * scale1);
        CHECK(std::abs(f.psi1[(j + 1) * 8] - there1.psi) < 1e-12 * scale1);
      }
    }
  }
  SUBCASE("|psi1| decays monotonically through an opaque barrier") {
    const auto f = wavefields(square_barrier(2.0, 1.0, 4), 1.0, 32);
    for (std::size_t i = 0; i + 1 < f.grid.size(); ++i) CHECK(std::abs(f.psi1[i + 1]) < std::abs(f.psi1[i]));
  }
  CHECK_THROWS_AS(wavefields(free_potential(), 1.0, 0), ValidationError);
}

TEST_CASE("cell integrals agree across the series / closed-form switch") {
  // |q2| L^2 = 1 is the switch point for cell_integrals
  for (double q2 : {1.0, -1.0}) {
    const auto lo = detail::cell_integrals(std::nextafter(q2, 0.0), 1.0);
    const auto hi = detail::cell_integrals(q2, 1.0);
    CHECK(std::abs(lo.cc - hi.cc) < 1e-12);
    CHECK(std::abs(lo.cs - hi.cs) < 1e-12);
    CHECK(std::abs(lo.ss - hi.ss) < 1e-12);
  }
  // midpoint-rule check of the defining integrals
  for (double q2 : {-7.0, -0.3, 0.0, 0.4, 9.0}) {
    const double L = 0.8;
    const int n = 20000;
    double cc = 0, cs = 0, ss = 0;
    for (int m = 0; m < n; ++m) {
      const auto p = detail::cell_propagator(q2, L * (m + 0.5) / n);
      cc += p.c * p.c;
      cs += p.c * p.s;
      ss += p.s * p.s;
    }
    const auto ints = detail::cell_integrals(q2, L);
    CHECK(ints.cc == doctest::Approx(cc * L / n).epsilon(1e-8));
    CHECK(ints.cs == doctest::Approx(cs * L / n).epsilon(1e-8));
    CHECK(ints.ss == doctest::Approx(ss * L / n).epsilon(1e-8));
  }
}
