#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qhd/error.hpp"
#include "qhd/evolve.hpp"
#include "qhd/hamiltonian.hpp"
#include "qhd/packets.hpp"

using namespace qhd;

namespace {

EMFieldSet smooth_fields(const GridSpec& grid) {
  std::vector<double> w(grid.n_points), a(grid.n_points);
  const double L = grid.length();
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double z = grid.z(j);
    w[j] = 0.4 * std::cos(2.0 * std::numbers::pi * z / L);
    a[j] = 0.3 * std::sin(2.0 * std::numbers::pi * z / L) + 0.1;
  }
  return EMFieldSet::tabulated(grid, w, a, 1.0, -1.0);
}

SpinorField run(const SpinorField& psi0, const EMFieldSet& em, double dt, std::size_t n) {
  EvolveConfig cfg;
  cfg.dt = dt;
  cfg.n_steps = n;
  cfg.record_every = n;
  return evolve(psi0, em, cfg).frames.back();
}

}  // namespace

TEST_CASE("free eigenmode acquires exp(-iEt)") {
  const GridSpec grid = GridSpec::make(64, 0.5);
  const double k = 2.0 * std::numbers::pi * 3.0 / grid.length();
  const double m = 1.0;
  for (auto rep : {Representation::chiral_as_paper, Representation::dirac}) {
    const auto u = free_spinor(k, m, 1, 1, rep);
    SpinorField psi(grid, 4, 0.0, rep);
    for (std::size_t j = 0; j < grid.n_points; ++j)
      for (int c = 0; c < 4; ++c) psi(c, j) = u[c] * std::polar(1.0, k * grid.z(j));
    const double dt = 0.05;
    const SpinorField out = run(psi, EMFieldSet::free(grid, m), dt, 100);
    SpinorField expected = psi;
    scale(expected, std::polar(1.0, -dispersion(k, m) * dt * 100));
    CHECK(max_abs_diff(out, expected) < 1e-8);
    CHECK(out.time() == doctest::Approx(5.0));
  }
}

TEST_CASE("norm is conserved with inhomogeneous W and A") {
  const GridSpec grid = GridSpec::make(256, 0.25);
  const EMFieldSet em = smooth_fields(grid);
  const SpinorField psi0 = branch_packet(grid, 0.0, 3.0, 0.4, 1.0, 1, 0, Representation::chiral_as_paper);
  const SpinorField out = run(psi0, em, grid.dt, 1000);
  CHECK(std::abs(norm2(out) - norm2(psi0)) / norm2(psi0) < 1e-10);
}

TEST_CASE("massless right mover is transported rigidly at c") {
  const GridSpec grid = GridSpec::make(256, 0.25);
  const auto env = gaussian_envelope(grid, -10.0, 2.0, 0.0);
  const SpinorField psi0 =
      constant_spinor_packet(grid, env, {1.0, 0.0, 0.0, 0.0}, Representation::chiral_as_paper);
  // 400 steps of dt = dx / 4 travel exactly 100 grid points.
  const SpinorField out = run(psi0, EMFieldSet::free(grid, 0.0), grid.dx / 4.0, 400);
  SpinorField shifted = psi0;
  const std::size_t n = grid.n_points;
  for (std::size_t j = 0; j < n; ++j) shifted(0, (j + 100) % n) = psi0(0, j);
  CHECK(l2_distance(out, shifted) < 1e-6);
}

TEST_CASE("n_steps = 0 returns the initial frame only") {
  const GridSpec grid = GridSpec::make(32, 0.5);
  const SpinorField psi0 = branch_packet(grid, 0.0, 2.0, 0.0, 1.0, 1, 0, Representation::chiral_as_paper);
  EvolveConfig cfg;
  cfg.dt = 0.05;
  const Trajectory t = evolve(psi0, EMFieldSet::free(grid), cfg);
  REQUIRE(t.frames.size() == 1);
  CHECK(max_abs_diff(t.frames[0], psi0) == 0.0);
}

TEST_CASE("recorded frames are spaced by dt * record_every") {
  const GridSpec grid = GridSpec::make(32, 0.5);
  const SpinorField psi0 = branch_packet(grid, 0.0, 2.0, 0.0, 1.0, 1, 0, Representation::chiral_as_paper);
  EvolveConfig cfg;
  cfg.dt = 0.01;
  cfg.n_steps = 30;
  cfg.record_every = 7;
  const Trajectory t = evolve(psi0, EMFieldSet::free(grid), cfg);
  REQUIRE(t.frames.size() == 5);
  for (std::size_t i = 1; i < t.frames.size(); ++i)
    CHECK(t.frames[i].time() - t.frames[i - 1].time() == doctest::Approx(0.07).epsilon(1e-12));
}

TEST_CASE("adjoint co-evolution tracks the conjugate field") {
  const GridSpec grid = GridSpec::make(256, 0.25);
  for (auto rep : {Representation::chiral_as_paper, Representation::dirac}) {
    const SpinorField psi0 = branch_packet(grid, 0.0, 3.0, 0.6, 1.0, 1, 0, rep);
    for (bool with_fields : {false, true}) {
      EvolveConfig cfg;
      cfg.dt = grid.dt;
      cfg.n_steps = 500;
      cfg.record_every = 50;
      cfg.adjoint_check = true;
      const EMFieldSet em = with_fields ? smooth_fields(grid) : EMFieldSet::free(grid);
      const Trajectory t = evolve(psi0, em, cfg);
      CHECK(t.adjoint_deviation < 1e-9);
    }
  }
}

TEST_CASE("Strang splitting is second order") {
  const GridSpec grid = GridSpec::make(256, 0.25);
  const EMFieldSet em = smooth_fields(grid);
  const SpinorField psi0 = branch_packet(grid, 0.0, 3.0, 0.4, 1.0, 1, 0, Representation::chiral_as_paper);
  const double T = 4.0;
  const SpinorField ref = run(psi0, em, T / 3200, 3200);
  const double e1 = l2_distance(run(psi0, em, T / 40, 40), ref);
  const double e2 = l2_distance(run(psi0, em, T / 80, 80), ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("energy error of a static-field run is O(dt^2)") {
  const GridSpec grid = GridSpec::make(256, 0.25);
  const EMFieldSet em = smooth_fields(grid);
  const GammaSet g = build_gammas(Representation::chiral_as_paper);
  const SpinorField psi0 = branch_packet(grid, 0.0, 3.0, 0.4, 1.0, 1, 0, g.representation);
  const double e0 = energy_expectation(psi0, em, g);
  const double d1 = std::abs(energy_expectation(run(psi0, em, 0.1, 40), em, g) - e0);
  const double d2 = std::abs(energy_expectation(run(psi0, em, 0.05, 80), em, g) - e0);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("uniform vector potential ramp accelerates the packet like a field") {
  // A(t) = -E t gives E = -dA/dt = E; the force on charge e is e E.
  const GridSpec grid = GridSpec::make(512, 0.25);
  EMFieldSet em = EMFieldSet::free(grid, 1.0, -1.0);
  const double field = 0.01;
  em.dA_dt.assign(grid.n_points, -field);
  const GammaSet g = build_gammas(Representation::chiral_as_paper);
  const SpinorField psi0 = branch_packet(grid, 0.0, 6.0, 0.0, 1.0, 1, 0, g.representation);
  const SpinorField out = run(psi0, em, 0.05, 200);
  // Canonical momentum is conserved, so the kinetic momentum is -e A(t) = e E t... check p - eA.
  const SpinorField d = grad(out);
  const cplx p = inner(out, d) * cplx(0.0, -1.0);
  const double kinetic = p.real() - em.charge * em.A_at(out.time())[0];
  CHECK(kinetic == doctest::Approx(em.charge * field * out.time()).epsilon(1e-6));
}

TEST_CASE("non-finite input aborts with a step index") {
  const GridSpec grid = GridSpec::make(32, 0.5);
  SpinorField psi0 = branch_packet(grid, 0.0, 2.0, 0.0, 1.0, 1, 0, Representation::chiral_as_paper);
  psi0(2, 5) = std::nan("");
  EvolveConfig cfg;
  cfg.dt = 0.05;
  cfg.n_steps = 3;
  try {
    evolve(psi0, EMFieldSet::free(grid), cfg);
    FAIL("expected BlowupError");
  } catch (const BlowupError& e) {
    CHECK(e.step() == 1);
  }
}
