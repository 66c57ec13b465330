#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qhd/em_field.hpp"
#include "qhd/evolve.hpp"
#include "qhd/hydro.hpp"
#include "qhd/spinor_field.hpp"

namespace qhd {

/// Correlated Gaussian noise: white in time, covariance exp(-(d / lambda_c)^2) in space.
struct NoiseSpec {
  double T = 0.0;         // amplitude^2 (k_B = 1)
  double lambda_c = 0.0;  // correlation length; <= 0 derives it from T via lambda_c(T, m, kappa)
  double kappa = 1.0;
  bool tau_white = true;
  std::uint64_t seed = 0;
  /// Densities below rho_floor * max rho are clamped to it where the noise divides by rho.
  double rho_floor = 1e-3;

  double amplitude() const;
};

/// kappa / sqrt(2 m T); +infinity at T = 0.
double lambda_c(double T, double mass, double kappa = 1.0);

/// Fills lambda_c from the law when unset; validates the rest.
NoiseSpec resolve(const NoiseSpec& spec, double mass);

struct NoiseField {
  Field values;
  std::uint64_t seed = 0;
  std::size_t step_index = 0;
  bool under_resolved = false;  // lambda_c < 2 dx
};

/// One realization with <Xi(x) Xi(x)> = T and correlation exp(-(d/lambda_c)^2), using the
/// periodic distance. Deterministic in (spec.seed, step_index).
NoiseField generate_noise(const NoiseSpec& spec, const GridSpec& grid, std::size_t step_index);

struct StochasticStepLog {
  double norm_before = 1.0;       // norm2 after the noise factor, before renormalization
  double correction = 0.0;        // renormalization factor minus one
  std::size_t clamped_points = 0;
};

/// Dirac Strang step followed by psi <- exp(Xi dt / rho_eff) psi with Xi the noise scaled by
/// 1/sqrt(dt) and rho_eff = max(rho, floor); then norm2 is restored to its value before the
/// step. T = 0 leaves the deterministic step untouched.
void stochastic_step(SpinorField& psi, const DiracStepper& stepper, const NoiseSpec& spec, double dt,
                     std::size_t step_index, StochasticStepLog* log = nullptr);
SpinorField stochastic_step(const SpinorField& psi, const EMFieldSet& em, const NoiseSpec& spec, double dt,
                            std::size_t step_index, StochasticStepLog* log = nullptr);

struct EnsembleOptions {
  std::size_t n_realizations = 2;
  unsigned threads = 0;          // 0: QHD_THREADS or hardware concurrency
  bool identical_seeds = false;  // every realization uses spec.seed
};

struct EnsembleReport {
  std::vector<double> times;
  std::vector<Field> mean_rho;  // per recorded time
  std::vector<Field> var_rho;   // unbiased sample variance
  /// Cumulative norm each realization would have without renormalization, per recorded time.
  std::vector<std::vector<double>> raw_norm;
  std::vector<double> mean_abs_correction;  // per realization
  std::vector<std::size_t> clamped_points;  // per realization
  std::size_t n_realizations = 0;
  GridSpec grid;
};

/// Realization r uses seed spec.seed + r. Reduction order is fixed, so results do not
/// depend on the thread count.
EnsembleReport ensemble_run(const SpinorField& psi0, const EMFieldSet& em, const NoiseSpec& spec,
                            const EvolveConfig& config, const EnsembleOptions& options);

/// Least-squares correlation length of noise samples: fits ln C(d) = -(d / lambda)^2 to the
/// normalized periodic autocovariance over lags until C first drops below min_corr.
double fit_correlation_length(const std::vector<Field>& samples, double dx, double min_corr = std::exp(-3.0));

/// Stochastic trajectory of one realization.
Trajectory evolve_stochastic(const SpinorField& psi0, const EMFieldSet& em, const NoiseSpec& spec,
                             const EvolveConfig& config, std::vector<StochasticStepLog>* logs = nullptr);

}  // namespace qhd
