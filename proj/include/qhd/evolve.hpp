#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "qhd/em_field.hpp"
#include "qhd/gamma.hpp"
#include "qhd/spectral.hpp"
#include "qhd/spinor_field.hpp"

namespace qhd {

enum class Scheme { strang_spectral };

struct EvolveConfig {
  Scheme scheme = Scheme::strang_spectral;
  double dt = 0.0;
  std::size_t n_steps = 0;
  std::size_t record_every = 1;
  /// Co-evolve the adjoint field with its own equation and report the deviation.
  bool adjoint_check = false;
};

void validate(const EvolveConfig& config);

struct Trajectory {
  std::vector<SpinorField> frames;
  EvolveConfig config;
  /// Max |Phi(t) - chi^0 conj(Psi(t))| over recorded frames; NaN unless requested.
  double adjoint_deviation = std::numeric_limits<double>::quiet_NaN();

  double frame_dt() const { return config.dt * static_cast<double>(config.record_every); }
};

/// Strang-split propagator for i d/dt psi = H psi on a fixed grid and field set.
///
/// Position half-steps apply exp(-i dt/2 (e W - e alpha_z (A - <A>))); the k-space
/// factor applies exp(-i M(k) dt) with M = alpha_z (k - e<A>) + beta m exactly, using
/// M^2 = E^2. A time-dependent A is sampled at the step midpoint.
class DiracStepper {
 public:
  DiracStepper(const EMFieldSet& em, const GammaSet& gammas);

  /// Advances psi by dt in place. Throws BlowupError tagged with step_index on NaN.
  void advance(SpinorField& psi, double dt, std::size_t step_index = 0) const;

  /// Stepper for the adjoint field Phi = chi^0 conj(psi), which obeys
  /// -i dPhi/dt = chi^0 H* chi^0 Phi.
  DiracStepper adjoint() const;

  const GammaSet& gammas() const { return gammas_; }
  const EMFieldSet& em() const { return em_; }

 private:
  EMFieldSet em_;
  GammaSet gammas_;
  Spectral spectral_;
  Mat4 alpha_;
  Mat4 beta_;
  double k_sign_ = 1.0;
  double time_sign_ = 1.0;
};

SpinorField step(const SpinorField& psi, const EMFieldSet& em, const GammaSet& gammas, double dt);

/// Called with every recorded frame and its step index.
using FrameObserver = std::function<void(const SpinorField&, std::size_t)>;

Trajectory evolve(const SpinorField& psi0, const EMFieldSet& em, const EvolveConfig& config,
                  const FrameObserver& observer = {});

/// Phi = chi^0 conj(psi), the column form of psi^dagger chi^0.
SpinorField adjoint_field(const SpinorField& psi, const GammaSet& gammas);

}  // namespace qhd
