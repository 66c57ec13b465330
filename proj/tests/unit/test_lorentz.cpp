#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qhd/error.hpp"
#include "qhd/hydro.hpp"
#include "qhd/lorentz.hpp"
#include "qhd/observables.hpp"
#include "qhd/packets.hpp"

using namespace qhd;

namespace {

const Representation chiral = Representation::chiral_as_paper;

Trajectory run(const SpinorField& psi0, double t_start, double t_span, double h, double dt) {
  SpinorField psi = psi0;
  psi.set_time(t_start);
  EvolveConfig cfg;
  cfg.dt = dt;
  cfg.record_every = static_cast<std::size_t>(std::lround(h / dt));
  cfg.n_steps = static_cast<std::size_t>(std::lround(t_span / dt));
  return evolve(psi, EMFieldSet::free(psi.grid()), cfg);
}

double max_entry(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("spinor boost reproduces the vector boost of the gammas") {
  for (Representation rep : {Representation::chiral_as_paper, Representation::dirac}) {
    const GammaSet g = build_gammas(rep);
    for (double beta : {-0.7, -0.2, 0.1, 0.5, 0.95}) {
      const BoostSpec b = make_boost(beta, rep);
      const Mat4 inv = b.spinor_boost.inverse();
      for (int mu = 0; mu < 4; ++mu) {
        Mat4 rhs = Mat4::Zero();
        for (int nu = 0; nu < 4; ++nu) rhs += b.lambda(mu, nu) * g.chi[nu];
        CHECK(max_entry(inv * g.chi[mu] * b.spinor_boost - rhs) < 1e-12);
      }
    }
  }
}

TEST_CASE("boost spec basics") {
  const BoostSpec zero = make_boost(0.0);
  CHECK(max_entry(zero.spinor_boost - Mat4::Identity()) == 0.0);
  CHECK(zero.gamma == 1.0);
  const BoostSpec b = make_boost(0.6);
  CHECK(b.gamma == doctest::Approx(1.25));
  CHECK(std::abs(b.spinor_boost.determinant()) == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_boost(1.0), Error);
  CHECK_THROWS_AS(make_boost(-1.2), Error);

  const double b1 = 0.3, b2 = 0.5;
  const BoostSpec c = make_boost((b1 + b2) / (1.0 + b1 * b2));
  CHECK(max_entry(make_boost(b1).spinor_boost * make_boost(b2).spinor_boost - c.spinor_boost) < 1e-12);
  CHECK((make_boost(b1).lambda * make_boost(b2).lambda - c.lambda).cwiseAbs().maxCoeff() < 1e-12);

  const auto e = unprimed_event(b, 1.5, -2.0);
  const auto back = primed_event(b, e[0], e[1]);
  CHECK(back[0] == doctest::Approx(1.5));
  CHECK(back[1] == doctest::Approx(-2.0));
}

TEST_CASE("zero boost copies stored frames") {
  const GridSpec grid = GridSpec::make(64, 0.25);
  const Trajectory t = run(branch_packet(grid, 0.0, 2.0, 0.2, 1.0, +1, 0, chiral), 0.0, 0.5, 0.05, 0.05);
  const BoostedTrajectory bt = boost_field(t, make_boost(0.0), {grid, {t.frames[3].time(), t.frames[5].time()}});
  CHECK(bt.slices[0].data() == t.frames[3].data());
  CHECK(bt.slices[1].data() == t.frames[5].data());
}

TEST_CASE("boosted plane wave has the Doppler-shifted wavenumber") {
  const GridSpec grid = GridSpec::make(256, 0.25);
  const double k = 2.0 * std::numbers::pi * 2.0 / grid.length();
  const double energy = std::hypot(k, 1.0);
  const auto env = gaussian_envelope(grid, 0.0, 1e9, k);
  const SpinorField psi = constant_spinor_packet(grid, env, free_spinor(k, 1.0, +1, 0, chiral), chiral);
  const Trajectory t = run(psi, -6.0, 12.0, 0.02, 0.01);
  for (double beta : {0.1, 0.2, -0.3}) {
    const BoostSpec b = make_boost(beta);
    const GridSpec pg = GridSpec::make(128, 0.25);
    const BoostedTrajectory bt = boost_field(t, b, {pg, {0.0}});
    std::vector<double> phase;
    for (std::size_t j = 0; j < pg.n_points; ++j) {
      double p = std::arg(bt.slices[0](0, j));
      if (j > 0) p += 2.0 * std::numbers::pi * std::round((phase.back() - p) / (2.0 * std::numbers::pi));
      phase.push_back(p);
    }
    const double measured = fit_slope(pg.coordinates(), phase);
    CHECK(measured == doctest::Approx(b.gamma * (k - beta * energy)).epsilon(1e-6));
  }
}

TEST_CASE("boost there and back recovers the field") {
  const GridSpec grid = GridSpec::make(512, 0.25);
  const Trajectory t = run(branch_packet(grid, 0.0, 4.0, 0.3, 1.0, +1, 0, chiral), -16.0, 32.0, 0.05, 0.0125);
  const double beta = 0.2, h = 0.05;
  PrimedSlices mid{GridSpec::make(256, 0.25), {}};
  for (int i = -80; i <= 80; ++i) mid.times.push_back(i * h);
  const BoostedTrajectory bt = boost_field(t, make_boost(beta), mid);
  Trajectory primed;
  primed.frames = bt.slices;
  primed.config.dt = h;
  const GridSpec small = GridSpec::make(128, 0.25);
  const BoostedTrajectory back = boost_field(primed, make_boost(-beta), {small, {0.0}});

  const SpinorField& ref = t.frames[320];
  REQUIRE(ref.time() == doctest::Approx(0.0).epsilon(1e-12));
  double err = 0.0;
  for (std::size_t j = 0; j < small.n_points; ++j)
    for (int c = 0; c < 4; ++c) err += std::norm(back.slices[0](c, j) - ref(c, j + 192)) * small.dx;
  CHECK(std::sqrt(err) < 1e-6);
}

TEST_CASE("coverage violations name the missing region") {
  const GridSpec grid = GridSpec::make(128, 0.25);
  const Trajectory t = run(branch_packet(grid, 0.0, 2.0, 0.0, 1.0, +1, 0, chiral), 0.0, 2.0, 0.05, 0.05);
  const PrimedSlices slices{GridSpec::make(64, 0.25), {0.0}};
  const Coverage c = coverage(t, make_boost(0.3), slices);
  CHECK_FALSE(c.ok);
  CHECK(c.t_min < 0.0);
  try {
    boost_field(t, make_boost(0.3), slices);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
  CHECK_THROWS_AS(boost_field(t, make_boost(0.0), {GridSpec::make(256, 0.25), {1.0}}), Error);
}

TEST_CASE("current transforms as a four-vector") {
  const GridSpec grid = GridSpec::make(512, 0.25);
  const SpinorField psi = branch_packet(grid, 0.0, 4.0, 0.3, 1.0, +1, 0, chiral);
  const PrimedSlices slices{GridSpec::make(256, 0.25), {0.0, 1.0}};
  double prev = 0.0;
  for (double h : {0.1, 0.05}) {
    const Trajectory t = run(psi, -8.0, 16.0, h, 0.0125);
    const CovarianceReport r = current_covariance_check(t, make_boost(0.2), slices);
    CHECK(r.max_deviation < 1e-5);
    CHECK(r.primed_charge.size() == 2);
    if (h == 0.05) {
      CHECK(r.max_deviation < prev / 8.0);
      CHECK(r.max_charge_error < 1e-6);
    }
    prev = r.max_deviation;
  }
}

TEST_CASE("plane wave current covariance") {
  const GridSpec grid = GridSpec::make(128, 0.25);
  const double k = 2.0 * std::numbers::pi * 3.0 / grid.length();
  const auto env = gaussian_envelope(grid, 0.0, 1e9, k);
  const SpinorField psi = constant_spinor_packet(grid, env, free_spinor(k, 1.0, +1, 1, chiral), chiral);
  const Trajectory t = run(psi, -3.0, 6.0, 0.01, 0.01);
  const CovarianceReport r = current_covariance_check(t, make_boost(0.2), {GridSpec::make(64, 0.25), {0.0}});
  CHECK(r.max_deviation < 1e-8);
}

TEST_CASE("bracket comparison under boosts") {
  const GridSpec grid = GridSpec::make(512, 0.25);
  const Trajectory t = run(branch_packet(grid, 0.0, 4.0, 0.3, 1.0, +1, 0, chiral), -8.0, 16.0, 0.05, 0.0125);
  const GridSpec pg = GridSpec::make(256, 0.25);

  const VquReport id = vqu_invariance_check(t, make_boost(0.0), grid, t.frames[100].time(), 0.05);
  CHECK(id.compared_points > 100);
  CHECK(id.V[0].relative() < 1e-12);

  const VquReport r1 = vqu_invariance_check(t, make_boost(0.1), pg, 0.0, 0.05);
  const VquReport r2 = vqu_invariance_check(t, make_boost(0.2), pg, 0.0, 0.05);
  CHECK_FALSE(r1.low_overlap);
  CHECK(r1.mask_overlap > 0.9);
  // V_a picks up the frame-dependent factor dt/dt'; rho V_a does not.
  CHECK(r2.V[0].relative() > r1.V[0].relative());
  CHECK(r1.rho_V[0].relative() < 1e-4);
  CHECK(r2.rho_V[0].relative() < 1e-4);
  CHECK(r1.contraction.max_abs < 1e-12);
  CHECK(r2.V[1].scale == 0.0);
}
