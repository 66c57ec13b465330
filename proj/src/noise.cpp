#include "qhd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qhd/error.hpp"
#include "qhd/parallel.hpp"
#include "qhd/spectral.hpp"

namespace qhd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t step) {
  return splitmix64(splitmix64(seed) ^ (step * 0xd1b54a32d192ed03ULL));
}

// sqrt of the spectral density of the periodic Gaussian kernel on this grid.
std::vector<double> kernel_root(const GridSpec& grid, double lc) {
  const std::size_t n = grid.n_points;
  std::vector<cplx> c(n), s(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double d = static_cast<double>(std::min(j, n - j)) * grid.dx / lc;
    c[j] = std::exp(-d * d);
  }
  Spectral(grid).forward(c, s);
  std::vector<double> root(n);
  for (std::size_t k = 0; k < n; ++k) root[k] = std::sqrt(std::max(0.0, s[k].real()));
  return root;
}

}  // namespace

double NoiseSpec::amplitude() const { return std::sqrt(T); }

double lambda_c(double T, double mass, double kappa) {
  if (!(mass > 0.0)) fail(ErrorKind::invalid_argument, "lambda_c needs m > 0");
  if (T < 0.0) fail(ErrorKind::invalid_argument, "lambda_c needs T >= 0");
  if (T == 0.0) return std::numeric_limits<double>::infinity();
  return kappa / std::sqrt(2.0 * mass * T);
}

NoiseSpec resolve(const NoiseSpec& spec, double mass) {
  if (!(spec.T >= 0.0) || !std::isfinite(spec.T)) fail(ErrorKind::invalid_argument, "noise T must be >= 0");
  if (!(spec.kappa > 0.0)) fail(ErrorKind::invalid_argument, "noise kappa must be > 0");
  if (!(spec.rho_floor > 0.0) || spec.rho_floor >= 1.0)
    fail(ErrorKind::invalid_argument, "noise rho_floor must be in (0, 1)");
  NoiseSpec out = spec;
  if (!(out.lambda_c > 0.0)) out.lambda_c = lambda_c(spec.T, mass, spec.kappa);
  return out;
}

NoiseField generate_noise(const NoiseSpec& spec, const GridSpec& grid, std::size_t step_index) {
  validate(grid);
  NoiseField f;
  f.seed = spec.seed;
  f.step_index = step_index;
  f.values.assign(grid.n_points, 0.0);
  if (!(spec.lambda_c > 0.0)) fail(ErrorKind::invalid_argument, "noise lambda_c must be > 0 (resolve the spec first)");
  f.under_resolved = spec.lambda_c < 2.0 * grid.dx;
  if (spec.T == 0.0 || std::isinf(spec.lambda_c)) return f;

  const std::size_t n = grid.n_points;
  std::mt19937_64 rng(stream_key(spec.seed, step_index));
  std::normal_distribution<double> normal;
  std::vector<cplx> w(n), wk(n);
  for (auto& v : w) v = normal(rng);
  const Spectral sp(grid);
  sp.forward(w, wk);
  const auto root = kernel_root(grid, spec.lambda_c);
  for (std::size_t k = 0; k < n; ++k) wk[k] *= root[k];
  sp.backward(wk, w);
  const double a = spec.amplitude();
  for (std::size_t j = 0; j < n; ++j) f.values[j] = a * w[j].real();
  return f;
}

void stochastic_step(SpinorField& psi, const DiracStepper& stepper, const NoiseSpec& spec, double dt,
                     std::size_t step_index, StochasticStepLog* log) {
  const double before = spec.T > 0.0 ? norm2(psi) : 0.0;
  stepper.advance(psi, dt, step_index);
  if (log) *log = StochasticStepLog{};
  if (spec.T == 0.0) return;

  const NoiseField xi = generate_noise(spec, psi.grid(), step_index);
  const Field rho = density(psi);
  const double floor = spec.rho_floor * *std::max_element(rho.begin(), rho.end());
  // White in time: the per-step source is Xi / sqrt(dt), applied over dt.
  const double scale = std::sqrt(dt);
  std::size_t clamped = 0;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    double r = rho[j];
    if (r < floor) {
      r = floor;
      ++clamped;
    }
    const double g = std::exp(scale * xi.values[j] / r);
    for (std::size_t c = 0; c < psi.n_components(); ++c) psi(c, j) *= g;
  }
  const double after = norm2(psi);
  if (!std::isfinite(after) || !(after > 0.0)) throw BlowupError(step_index, "stochastic term produced a non-finite norm");
  const double factor = std::sqrt(before / after);
  qhd::scale(psi, factor);
  if (log) {
    log->norm_before = after / before;
    log->correction = factor - 1.0;
    log->clamped_points = clamped;
  }
}

SpinorField stochastic_step(const SpinorField& psi, const EMFieldSet& em, const NoiseSpec& spec, double dt,
                            std::size_t step_index, StochasticStepLog* log) {
  SpinorField out = psi;
  const DiracStepper stepper(em, build_gammas(psi.representation()));
  stochastic_step(out, stepper, resolve(spec, em.mass), dt, step_index, log);
  return out;
}

Trajectory evolve_stochastic(const SpinorField& psi0, const EMFieldSet& em, const NoiseSpec& spec_in,
                             const EvolveConfig& config, std::vector<StochasticStepLog>* logs) {
  validate(config);
  const NoiseSpec spec = resolve(spec_in, em.mass);
  const DiracStepper stepper(em, build_gammas(psi0.representation()));
  Trajectory traj;
  traj.config = config;
  traj.frames.push_back(psi0);
  SpinorField psi = psi0;
  if (logs) logs->clear();
  for (std::size_t n = 1; n <= config.n_steps; ++n) {
    StochasticStepLog log;
    stochastic_step(psi, stepper, spec, config.dt, n, &log);
    psi.set_time(psi0.time() + static_cast<double>(n) * config.dt);
    if (logs) logs->push_back(log);
    if (n % config.record_every == 0) traj.frames.push_back(psi);
  }
  return traj;
}

EnsembleReport ensemble_run(const SpinorField& psi0, const EMFieldSet& em, const NoiseSpec& spec_in,
                            const EvolveConfig& config, const EnsembleOptions& options) {
  validate(config);
  const std::size_t nr = options.n_realizations;
  if (nr < 2) fail(ErrorKind::invalid_argument, "ensemble needs at least 2 realizations");
  const NoiseSpec spec = resolve(spec_in, em.mass);
  const DiracStepper stepper(em, build_gammas(psi0.representation()));
  const std::size_t n_rec = config.n_steps / config.record_every + 1;
  const std::size_t n = psi0.n_points();

  struct Result {
    std::vector<Field> rho;
    std::vector<double> raw_norm;
    double mean_abs_correction = 0.0;
    std::size_t clamped = 0;
  };
  std::vector<Result> results(nr);

  auto run_one = [&](std::size_t r) {
    NoiseSpec s = spec;
    if (!options.identical_seeds) s.seed = spec.seed + r;
    Result& out = results[r];
    SpinorField psi = psi0;
    double raw = 1.0, corr = 0.0;
    out.rho.push_back(density(psi));
    out.raw_norm.push_back(raw);
    for (std::size_t k = 1; k <= config.n_steps; ++k) {
      StochasticStepLog log;
      stochastic_step(psi, stepper, s, config.dt, k, &log);
      psi.set_time(psi0.time() + static_cast<double>(k) * config.dt);
      raw *= log.norm_before;
      corr += std::abs(log.correction);
      out.clamped += log.clamped_points;
      if (k % config.record_every == 0) {
        out.rho.push_back(density(psi));
        out.raw_norm.push_back(raw);
      }
    }
    out.mean_abs_correction = config.n_steps ? corr / static_cast<double>(config.n_steps) : 0.0;
  };

  parallel_for(nr, run_one, options.threads);

  EnsembleReport rep;
  rep.grid = psi0.grid();
  rep.n_realizations = nr;
  for (std::size_t i = 0; i < n_rec; ++i)
    rep.times.push_back(psi0.time() + static_cast<double>(i * config.record_every) * config.dt);
  rep.mean_rho.assign(n_rec, Field(n, 0.0));
  rep.var_rho.assign(n_rec, Field(n, 0.0));
  for (std::size_t i = 0; i < n_rec; ++i) {
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t j = 0; j < n; ++j) rep.mean_rho[i][j] += results[r].rho[i][j];
    for (auto& v : rep.mean_rho[i]) v /= static_cast<double>(nr);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t j = 0; j < n; ++j) {
        const double d = results[r].rho[i][j] - rep.mean_rho[i][j];
        rep.var_rho[i][j] += d * d;
      }
    for (auto& v : rep.var_rho[i]) v /= static_cast<double>(nr - 1);
  }
  for (auto& r : results) {
    rep.raw_norm.push_back(r.raw_norm);
    rep.mean_abs_correction.push_back(r.mean_abs_correction);
    rep.clamped_points.push_back(r.clamped);
  }
  return rep;
}

double fit_correlation_length(const std::vector<Field>& samples, double dx, double min_corr) {
  if (samples.empty()) fail(ErrorKind::invalid_argument, "fit_correlation_length needs samples");
  const std::size_t n = samples[0].size();
  std::vector<double> cov(n / 2, 0.0);
  for (const auto& s : samples) {
    if (s.size() != n) fail(ErrorKind::grid_mismatch, "noise samples differ in length");
    for (std::size_t lag = 0; lag < cov.size(); ++lag) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += s[j] * s[(j + lag) % n];
      cov[lag] += acc;
    }
  }
  if (!(cov[0] > 0.0)) fail(ErrorKind::invalid_argument, "noise samples have zero variance");
  // ln C(d) = -(d / lambda)^2: least squares through the origin in d^2.
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t lag = 1; lag < cov.size(); ++lag) {
    const double c = cov[lag] / cov[0];
    if (c < min_corr) break;
    const double d2 = std::pow(static_cast<double>(lag) * dx, 2);
    sxy += d2 * std::log(c);
    sxx += d2 * d2;
  }
  if (sxx == 0.0 || !(sxy < 0.0)) fail(ErrorKind::invalid_argument, "correlation decays within one lag; cannot fit");
  return std::sqrt(-sxx / sxy);
}

}  // namespace qhd
