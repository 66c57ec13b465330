#include "qhd/evolve.hpp"

#include <cmath>
#include <array>
#include <numeric>
#include <optional>

#include "qhd/error.hpp"

namespace qhd {

void validate(const EvolveConfig& config) {
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) fail(ErrorKind::invalid_argument, "dt must be > 0");
  if (config.record_every < 1) fail(ErrorKind::invalid_argument, "record_every must be >= 1");
}

DiracStepper::DiracStepper(const EMFieldSet& em, const GammaSet& gammas)
    : em_(em), gammas_(gammas), spectral_(em.grid), alpha_(gammas.alpha_z()), beta_(gammas.beta()) {
  validate(em_);
}

DiracStepper DiracStepper::adjoint() const {
  DiracStepper s = *this;
  const Mat4& c0 = gammas_.chi[0];
  s.alpha_ = c0 * alpha_.conjugate() * c0;
  s.beta_ = c0 * beta_.conjugate() * c0;
  s.k_sign_ = -k_sign_;
  s.time_sign_ = -time_sign_;
  return s;
}

void DiracStepper::advance(SpinorField& psi, double dt, std::size_t step_index) const {
  if (psi.n_components() != 4) fail(ErrorKind::invalid_argument, "Dirac step needs 4 components");
  require_same_space(psi.grid(), em_.grid, "step");
  if (psi.representation() != gammas_.representation)
    fail(ErrorKind::invalid_argument, "field and gamma set use different representations");

  const std::size_t n = psi.n_points();
  const double e = em_.charge;
  const double t_mid = psi.time() + 0.5 * dt;
  std::vector<double> a = em_.A_at(t_mid);
  const double a_mean = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
  bool varying_a = false;
  for (auto& v : a) {
    v -= a_mean;
    if (v != 0.0) varying_a = true;
  }

  // exp(-i s dt/2 (e W - e alpha dA)) = exp(-i s dt/2 e W) (cos th + i sin th alpha), th = s dt/2 e dA.
  const double hs = 0.5 * dt * time_sign_;
  auto position_half = [&] {
    for (std::size_t j = 0; j < n; ++j) {
      Eigen::Vector4cd v(psi(0, j), psi(1, j), psi(2, j), psi(3, j));
      const cplx phase = std::polar(1.0, -hs * e * em_.W[j]);
      if (varying_a) {
        const double th = hs * e * a[j];
        v = std::cos(th) * v + cplx(0.0, std::sin(th)) * (alpha_ * v);
      }
      for (int c = 0; c < 4; ++c) psi(c, j) = phase * v(c);
    }
  };

  position_half();

  std::array<std::vector<cplx>, 4> spec;
  for (int c = 0; c < 4; ++c) {
    spec[c].resize(n);
    spectral_.forward(psi.component(c), spec[c]);
  }
  const auto& ks = spectral_.wavenumbers();
  for (std::size_t i = 0; i < n; ++i) {
    const double kk = k_sign_ * ks[i] - e * a_mean;
    const Mat4 m = alpha_ * kk + beta_ * em_.mass;
    const double en = std::sqrt(kk * kk + em_.mass * em_.mass);
    const double w = en * dt * time_sign_;
    // exp(-i M dt s) = cos(E dt) - i s sin(E dt) M / E
    const cplx sinc = en > 0.0 ? cplx(0.0, -std::sin(w) / en) : cplx(0.0, -dt * time_sign_);
    Eigen::Vector4cd v(spec[0][i], spec[1][i], spec[2][i], spec[3][i]);
    const Eigen::Vector4cd u = std::cos(w) * v + sinc * (m * v);
    for (int c = 0; c < 4; ++c) spec[c][i] = u(c);
  }
  for (int c = 0; c < 4; ++c) spectral_.backward(spec[c], psi.component(c));

  position_half();

  psi.set_time(psi.time() + dt);
  if (!psi.all_finite()) throw BlowupError(step_index, "non-finite value in Dirac step");
}

SpinorField step(const SpinorField& psi, const EMFieldSet& em, const GammaSet& gammas, double dt) {
  SpinorField out = psi;
  DiracStepper(em, gammas).advance(out, dt);
  return out;
}

SpinorField adjoint_field(const SpinorField& psi, const GammaSet& gammas) {
  SpinorField c = psi;
  for (auto& v : c.data()) v = std::conj(v);
  return apply_pointwise(gammas.chi[0], c);
}

Trajectory evolve(const SpinorField& psi0, const EMFieldSet& em, const EvolveConfig& config,
                  const FrameObserver& observer) {
  validate(config);
  const GammaSet gammas = build_gammas(psi0.representation());
  const DiracStepper stepper(em, gammas);

  Trajectory traj;
  traj.config = config;
  SpinorField psi = psi0;
  const double t0 = psi0.time();
  auto record = [&](std::size_t n) {
    traj.frames.push_back(psi);
    if (observer) observer(psi, n);
  };
  record(0);

  std::optional<DiracStepper> adj_stepper;
  SpinorField phi;
  if (config.adjoint_check) {
    adj_stepper = stepper.adjoint();
    phi = adjoint_field(psi0, gammas);
    traj.adjoint_deviation = 0.0;
  }

  for (std::size_t n = 1; n <= config.n_steps; ++n) {
    stepper.advance(psi, config.dt, n);
    // Stamp times from the step count so frame spacing is exact.
    psi.set_time(t0 + static_cast<double>(n) * config.dt);
    if (adj_stepper) {
      adj_stepper->advance(phi, config.dt, n);
      phi.set_time(psi.time());
    }
    if (n % config.record_every == 0) {
      record(n);
      if (adj_stepper)
        traj.adjoint_deviation =
            std::max(traj.adjoint_deviation, max_abs_diff(phi, adjoint_field(psi, gammas)));
    }
  }
  return traj;
}

}  // namespace qhd
