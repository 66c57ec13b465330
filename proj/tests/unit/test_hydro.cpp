#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qhd/evolve.hpp"
#include "qhd/hamiltonian.hpp"
#include "qhd/hydro.hpp"
#include "qhd/observables.hpp"
#include "qhd/packets.hpp"

using namespace qhd;

namespace {

const Representation chiral = Representation::chiral_as_paper;

SpinorField plane_wave(const GridSpec& grid, double k, const std::array<cplx, 4>& u) {
  SpinorField psi(grid, 4, 0.0, chiral);
  for (std::size_t j = 0; j < grid.n_points; ++j)
    for (int c = 0; c < 4; ++c) psi(c, j) = u[c] * std::polar(1.0, k * grid.z(j));
  return psi;
}

double k_mode(const GridSpec& grid, int m) { return 2.0 * std::numbers::pi * m / grid.length(); }

// Three frames spaced by h, starting after t_skip.
std::vector<HydroFrame> three_frames(const SpinorField& psi0, const EMFieldSet& em, double dt, std::size_t skip,
                                     std::size_t every) {
  EvolveConfig cfg;
  cfg.dt = dt;
  cfg.n_steps = skip + 2 * every;
  cfg.record_every = every;
  const Trajectory t = evolve(psi0, em, cfg);
  const std::size_t first = skip / every;
  return {extract(t.frames[first]), extract(t.frames[first + 1]), extract(t.frames[first + 2])};
}

}  // namespace

TEST_CASE("decompose a uniform spinor") {
  const GridSpec grid = GridSpec::make(32, 0.5);
  SpinorField psi(grid, 4);
  for (std::size_t j = 0; j < grid.n_points; ++j) psi(1, j) = std::polar(0.7, 1.2);
  const Decomposition d = decompose(psi);
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    CHECK(d.R[1][j] == doctest::Approx(0.7));
    CHECK(d.S[1][j] == doctest::Approx(1.2));
  }
  CHECK(d.seams[1].empty());
  CHECK(d.all_masked[0]);
  CHECK_FALSE(d.all_masked[1]);
}

TEST_CASE("phase winding unwraps to k L with one seam") {
  const GridSpec grid = GridSpec::make(128, 0.25);
  const double k = k_mode(grid, 5);
  const SpinorField psi = plane_wave(grid, k, {1.0, 0.0, 0.0, 0.0});
  const Decomposition d = decompose(psi);
  CHECK(d.winding[0] == 5);
  CHECK(d.seams[0].size() == 1);
  CHECK(d.S[0].back() - d.S[0].front() + k * grid.dx == doctest::Approx(k * grid.length()));
  // Oracle: cumulative trapezoid integral of the chain-rule phase gradient.
  const HydroFrame f = extract(psi);
  double s = d.S[0][0];
  for (std::size_t j = 1; j < grid.n_points; ++j) {
    s += 0.5 * (f.grad_S[0][j - 1] + f.grad_S[0][j]) * grid.dx;
    CHECK(d.S[0][j] == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("masked gaps restart the unwrap with a recorded seam") {
  const GridSpec grid = GridSpec::make(64, 0.5);
  SpinorField psi(grid, 4);
  for (std::size_t j = 0; j < grid.n_points; ++j)
    psi(2, j) = (j >= 20 && j < 30) ? cplx(0.0) : std::polar(1.0, 0.3 * static_cast<double>(j));
  const Decomposition d = decompose(psi);
  CHECK(d.valid[2][25] == 0);
  REQUIRE_FALSE(d.seams[2].empty());
  CHECK(std::find(d.seams[2].begin(), d.seams[2].end(), 30u) != d.seams[2].end());
}

TEST_CASE("an identically zero component is fully masked and leaves no NaN") {
  const GridSpec grid = GridSpec::make(64, 0.5);
  const SpinorField psi = branch_packet(grid, 0.0, 3.0, 0.3, 1.0, 1, 0, chiral);
  const HydroFrame f = extract(psi);
  CHECK(f.parts.all_masked[1]);
  CHECK(f.parts.all_masked[3]);
  for (int a = 0; a < 4; ++a)
    for (std::size_t j = 0; j < grid.n_points; ++j) {
      CHECK(std::isfinite(f.logratio[a][j]));
      CHECK(std::isfinite(f.parts.S[a][j]));
    }
  for (std::size_t j = 0; j < grid.n_points; ++j) CHECK(std::isfinite(f.p[1][j]));
}

TEST_CASE("current of a rest spinor and J0 = sum |psi_a|^2") {
  const GridSpec grid = GridSpec::make(32, 0.5);
  const GammaSet g = build_gammas(chiral);
  const SpinorField rest = plane_wave(grid, 0.0, free_spinor(0.0, 1.0, 1, 0, chiral));
  const auto J = current(rest, g);
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    CHECK(std::abs(J[3][j]) < 1e-15);
    CHECK(J[0][j] == doctest::Approx(1.0));
  }
  const SpinorField psi = branch_packet(grid, 1.0, 2.0, 0.7, 1.0, -1, 1, chiral);
  const auto J2 = current(psi, g);
  const auto rho = density(psi);
  for (std::size_t j = 0; j < grid.n_points; ++j) CHECK(J2[0][j] == rho[j]);
}

TEST_CASE("current is representation independent") {
  const GridSpec grid = GridSpec::make(64, 0.5);
  const SpinorField psi = branch_packet(grid, 1.0, 2.0, 0.7, 1.0, 1, 0, chiral);
  const auto jc = current(psi, build_gammas(chiral));
  const auto jd = current(to_representation(psi, Representation::dirac), build_gammas(Representation::dirac));
  for (int mu = 0; mu < 4; ++mu)
    for (std::size_t j = 0; j < grid.n_points; ++j) CHECK(std::abs(jc[mu][j] - jd[mu][j]) < 1e-14);
}

TEST_CASE("continuity residual is second order in the frame spacing") {
  const GridSpec grid = GridSpec::make(512, 0.25);
  const EMFieldSet em = EMFieldSet::free(grid);
  const SpinorField psi0 = branch_packet(grid, 0.0, 4.0, 0.5, 1.0, 1, 0, chiral);
  const auto a = three_frames(psi0, em, 0.02, 100, 5);
  const auto b = three_frames(psi0, em, 0.01, 200, 5);
  const double r1 = continuity_residual(a[0], a[1], a[2]).l2;
  const double r2 = continuity_residual(b[0], b[1], b[2]).l2;
  CHECK(r1 / r2 > 3.5);
  CHECK(r1 / r2 < 4.5);
}

TEST_CASE("velocity of plane waves and rest spinors") {
  const GridSpec grid = GridSpec::make(64, 0.5);
  const double m = 1.0;
  for (int mode : {1, 4, -3}) {
    const double k = k_mode(grid, mode);
    const HydroFrame f = extract(plane_wave(grid, k, free_spinor(k, m, 1, 0, chiral)));
    for (std::size_t j = 0; j < grid.n_points; ++j) {
      CHECK(f.qdot[j] == doctest::Approx(k / dispersion(k, m)).epsilon(1e-12));
      CHECK(std::abs(f.qdot[j]) <= 1.0 + 1e-9);
    }
  }
  const HydroFrame r = extract(plane_wave(grid, 0.0, free_spinor(0.0, m, 1, 1, chiral)));
  for (double v : velocity(r)) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("|qdot| <= c on a mixed packet") {
  const GridSpec grid = GridSpec::make(256, 0.25);
  SpinorField psi = branch_packet(grid, 0.0, 2.0, 0.9, 1.0, 1, 0, chiral);
  const SpinorField neg = branch_packet(grid, 0.5, 1.0, -1.2, 1.0, -1, 1, chiral);
  for (std::size_t i = 0; i < psi.data().size(); ++i) psi.data()[i] += cplx(0.3, 0.2) * neg.data()[i];
  const HydroFrame f = extract(psi);
  for (std::size_t j = 0; j < grid.n_points; ++j)
    if (f.valid[j]) CHECK(std::abs(f.qdot[j]) <= 1.0 + 1e-9);
}

TEST_CASE("momentum of plane waves and constant phase offsets") {
  const GridSpec grid = GridSpec::make(64, 0.5);
  const double k = k_mode(grid, 3);
  const HydroFrame f = extract(plane_wave(grid, k, {0.5, 0.5, 0.5, 0.5}));
  const HydroFrame g = extract(plane_wave(grid, k, {0.5, std::polar(0.5, 1.0), std::polar(0.5, -2.0), 0.5}));
  for (int pair = 0; pair < 2; ++pair)
    for (std::size_t j = 0; j < grid.n_points; ++j) {
      CHECK(f.p[pair][j] == doctest::Approx(k).epsilon(1e-12));
      CHECK(g.p[pair][j] == doctest::Approx(f.p[pair][j]).epsilon(1e-12));
    }
}

TEST_CASE("packet-centre momentum matches gamma m v of the tracked centroid") {
  const GridSpec grid = GridSpec::make(1024, 0.25);
  const double m = 1.0, v = 0.3;
  const double k0 = m * v / std::sqrt(1.0 - v * v);
  const SpinorField psi0 = branch_packet(grid, -20.0, 8.0, k0, m, 1, 0, chiral);
  EvolveConfig cfg;
  cfg.dt = 0.05;
  cfg.n_steps = 800;
  cfg.record_every = 800;
  const Trajectory t = evolve(psi0, EMFieldSet::free(grid, m), cfg);
  const double vel = (mean_position(t.frames[1]) - mean_position(t.frames[0])) / t.frames[1].time();
  const double p_rel = m * vel / std::sqrt(1.0 - vel * vel);
  const HydroFrame f = extract(t.frames[1]);
  const std::size_t centre = static_cast<std::size_t>(std::lround(mean_position(t.frames[1]) / grid.dx)) +
                             grid.n_points / 2;
  CHECK(f.p[0][centre] == doctest::Approx(p_rel).epsilon(0.02));
}

TEST_CASE("quantum potential vanishes for plane waves and pairs cancel") {
  const GridSpec grid = GridSpec::make(64, 0.5);
  const double k = k_mode(grid, 2);
  const SpinorField pw = plane_wave(grid, k, free_spinor(k, 1.0, 1, 0, chiral));
  const auto fr = three_frames(pw, EMFieldSet::free(grid), 0.05, 0, 2);
  const QuantumPotential q = quantum_potential(fr[0], fr[1], fr[2]);
  for (int a : {0, 2})
    for (std::size_t j = 0; j < grid.n_points; ++j) CHECK(std::abs(q.V[a][j]) < 1e-12);

  const GridSpec g2 = GridSpec::make(256, 0.25);
  SpinorField psi = branch_packet(g2, 0.0, 2.0, 0.5, 1.0, 1, 0, chiral);
  const SpinorField other = branch_packet(g2, 1.0, 3.0, -0.4, 1.0, 1, 1, chiral);
  for (std::size_t i = 0; i < psi.data().size(); ++i) psi.data()[i] += other.data()[i];
  normalize(psi);
  const auto f2 = three_frames(psi, EMFieldSet::free(g2), 0.02, 50, 1);
  const QuantumPotential q2 = quantum_potential(f2[0], f2[1], f2[2]);
  CHECK(q2.max_abs_B > 0.0);
  CHECK(q2.max_abs_contraction < 1e-9 * q2.max_abs_B);
  CHECK(q2.imaginary_prefactor_dropped);
}

TEST_CASE("fewer than three equally spaced frames are rejected") {
  const GridSpec grid = GridSpec::make(32, 0.5);
  SpinorField psi = branch_packet(grid, 0.0, 2.0, 0.0, 1.0, 1, 0, chiral);
  const HydroFrame a = extract(psi);
  psi.set_time(0.1);
  const HydroFrame b = extract(psi);
  psi.set_time(0.3);
  const HydroFrame c = extract(psi);
  CHECK_THROWS(quantum_potential(a, b, c));
}

TEST_CASE("hamiltonian density") {
  const GridSpec grid = GridSpec::make(64, 0.5);
  const double m = 1.0;
  const HydroFrame rest = extract(plane_wave(grid, 0.0, free_spinor(0.0, m, 1, 0, chiral)));
  for (double h : hamiltonian_density(rest, EMFieldSet::free(grid, m))) CHECK(h == doctest::Approx(m));

  const double k = k_mode(grid, 5);
  const HydroFrame pw = extract(plane_wave(grid, k, free_spinor(k, m, 1, 0, chiral)));
  EMFieldSet em = EMFieldSet::free(grid, m, -1.0);
  const Field h0 = hamiltonian_density(pw, em, 0);
  for (double h : h0) CHECK(std::abs(h - dispersion(k, m)) < 1e-6);
  std::fill(em.W.begin(), em.W.end(), 0.3);
  const Field h1 = hamiltonian_density(pw, em, 0);
  for (std::size_t j = 0; j < h1.size(); ++j) CHECK(h1[j] - h0[j] == doctest::Approx(-0.3).epsilon(1e-14));
}

TEST_CASE("force balance is exact for a plane wave") {
  const GridSpec grid = GridSpec::make(64, 0.5);
  const double k = k_mode(grid, 3);
  const SpinorField pw = plane_wave(grid, k, free_spinor(k, 1.0, 1, 0, chiral));
  const EMFieldSet em = EMFieldSet::free(grid);
  const auto fr = three_frames(pw, em, 0.05, 0, 1);
  const ForceBalance fb = force_balance(fr[0], fr[1], fr[2], em, 0);
  CHECK(fb.core_points == grid.n_points);
  CHECK(fb.max_abs < 1e-10);
}

TEST_CASE("density-weighted force balance in a uniform field") {
  const GridSpec grid = GridSpec::make(1024, 0.25);
  const double field = 0.01;
  const EMFieldSet em = EMFieldSet::uniform_e(grid, field, 1.0, -1.0);
  const SpinorField psi0 = branch_packet(grid, 0.0, 16.0, 0.0, 1.0, 1, 0, chiral);
  const auto fr = three_frames(psi0, em, 0.02, 100, 1);
  const ForceBalance fb = force_balance(fr[0], fr[1], fr[2], em, 0);
  CHECK(fb.mean_force == doctest::Approx(em.charge * field));
  CHECK(std::abs(fb.mean_lhs - fb.mean_rhs) < 0.01 * std::abs(em.charge * field));
  CHECK(fb.mean_lhs == doctest::Approx(em.charge * field).epsilon(0.01));
}

TEST_CASE("pointwise force residual of a free Gaussian does not shrink with dt") {
  // The log-ratio potential is O(v^2) in this regime and cannot carry the spreading
  // force; the residual is a property of the model, not of the integrator.
  const GridSpec grid = GridSpec::make(512, 0.125);
  const EMFieldSet em = EMFieldSet::free(grid);
  const SpinorField psi0 = branch_packet(grid, 0.0, 4.0, 0.3, 1.0, 1, 0, chiral);
  const auto a = three_frames(psi0, em, 0.02, 100, 1);
  const auto b = three_frames(psi0, em, 0.01, 200, 2);
  const double r1 = force_balance(a[0], a[1], a[2], em, 0).weighted_l2;
  const double r2 = force_balance(b[0], b[1], b[2], em, 0).weighted_l2;
  CHECK(r1 > 1e-4);
  CHECK(r1 / r2 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("hydro fields by name") {
  const GridSpec grid = GridSpec::make(32, 0.5);
  const HydroFrame f = extract(branch_packet(grid, 0.0, 2.0, 0.2, 1.0, 1, 0, chiral));
  for (const auto& n : hydro_field_names()) CHECK(hydro_field(f, n).size() == grid.n_points);
  CHECK_THROWS(hydro_field(f, "nope"));
}
