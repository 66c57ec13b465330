#include "qhd/nonlinear.hpp"

#include <cmath>

#include "qhd/error.hpp"
#include "qhd/observables.hpp"

namespace qhd {

namespace {

QuantumPotential bracket(const SpinorField& prev, const SpinorField& cur, const SpinorField& next) {
  return quantum_potential(extract(prev), extract(cur), extract(next));
}

SpinorField applied(const QuantumPotential& q, const SpinorField& cur, double sign) {
  SpinorField chiral = to_representation(cur, Representation::chiral_as_paper);
  for (int a = 0; a < 4; ++a)
    for (std::size_t j = 0; j < chiral.n_points(); ++j)
      chiral(a, j) *= cplx(0.0, 0.5 * sign * q.B[a][j]);
  return to_representation(chiral, cur.representation());
}

std::size_t masked_count(const QuantumPotential& q) {
  std::size_t c = 0;
  for (auto v : q.valid) c += v ? 0 : 1;
  return c;
}

void apply_factor(SpinorField& psi, const QuantumPotential& q, double dt) {
  for (int a = 0; a < 4; ++a)
    for (std::size_t j = 0; j < psi.n_points(); ++j) psi(a, j) *= std::exp(-0.25 * q.B[a][j] * dt);
}

}  // namespace

SpinorField bracket_term(const SpinorField& prev, const SpinorField& cur, const SpinorField& next) {
  return applied(bracket(prev, cur, next), cur, 1.0);
}

SpinorField classical_term(const SpinorField& prev, const SpinorField& cur, const SpinorField& next) {
  return applied(bracket(prev, cur, next), cur, -1.0);
}

ClassicalRun evolve_classical(const SpinorField& psi0, const EMFieldSet& em, const EvolveConfig& config,
                              double max_mask_growth) {
  validate(config);
  if (psi0.n_components() != 4) fail(ErrorKind::invalid_argument, "classical evolution needs 4 components");
  const GammaSet gammas = build_gammas(Representation::chiral_as_paper);
  const DiracStepper stepper(em, gammas);
  const Representation out_rep = psi0.representation();
  const double n_grid = static_cast<double>(psi0.n_points());
  const double t0 = psi0.time();

  ClassicalRun run;
  run.trajectory.config = config;
  SpinorField psi = to_representation(psi0, Representation::chiral_as_paper);
  auto record = [&] {
    run.trajectory.frames.push_back(to_representation(psi, out_rep));
    run.times.push_back(psi.time());
    run.width.push_back(position_width(psi));
    run.centroid.push_back(mean_position(psi));
  };
  record();

  SpinorField prev = psi;
  stepper.advance(prev, -config.dt, 0);
  prev.set_time(t0 - config.dt);
  long initial_masked = -1;

  for (std::size_t n = 1; n <= config.n_steps; ++n) {
    SpinorField pred = psi;
    stepper.advance(pred, config.dt, n);
    pred.set_time(psi.time() + config.dt);
    const QuantumPotential q = bracket(prev, psi, pred);

    const long masked = static_cast<long>(masked_count(q));
    if (initial_masked < 0) initial_masked = masked;
    const double growth = static_cast<double>(masked - initial_masked) / n_grid;
    run.max_mask_growth = std::max(run.max_mask_growth, growth);
    if (growth > max_mask_growth) throw BlowupError(n, "node mask grew beyond the allowed fraction");

    const double before = norm2(psi);
    SpinorField next = psi;
    apply_factor(next, q, config.dt);
    stepper.advance(next, config.dt, n);
    apply_factor(next, q, config.dt);
    const double after = norm2(next);
    if (!std::isfinite(after) || !(after > 0.0)) throw BlowupError(n, "non-finite norm in classical step");
    run.norm_correction.push_back(std::sqrt(after / before) - 1.0);
    scale(next, std::sqrt(before / after));
    next.set_time(t0 + static_cast<double>(n) * config.dt);
    if (!next.all_finite()) throw BlowupError(n, "non-finite value in classical step");

    prev = std::move(psi);
    psi = std::move(next);
    if (n % config.record_every == 0) record();
  }
  return run;
}

WidthSeries width_series(const Trajectory& traj) {
  WidthSeries s;
  for (const auto& f : traj.frames) {
    s.times.push_back(f.time());
    s.width.push_back(position_width(f));
    s.centroid.push_back(mean_position(f));
  }
  return s;
}

WidthSeries width_series(const ClassicalRun& run) { return {run.times, run.width, run.centroid}; }

double spreading_ratio(const WidthSeries& nonlinear, const WidthSeries& linear) {
  if (nonlinear.width.size() < 2 || linear.width.size() < 2)
    fail(ErrorKind::invalid_argument, "width series needs at least two samples");
  const double lin = linear.width.back() - linear.width.front();
  if (lin == 0.0) fail(ErrorKind::domain, "linear run does not spread");
  return (nonlinear.width.back() - nonlinear.width.front()) / lin;
}

}  // namespace qhd
