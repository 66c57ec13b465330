#include "qhd/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qhd/error.hpp"
#include "qhd/hydro.hpp"
#include "qhd/parallel.hpp"
#include "qhd/spectral.hpp"

namespace qhd {

namespace {

std::array<double, 4> lagrange_weights(double x, const std::array<double, 4>& nodes) {
  std::array<double, 4> w{};
  for (int i = 0; i < 4; ++i) {
    if (x == nodes[i]) {
      w = {};
      w[i] = 1.0;
      return w;
    }
  }
  for (int i = 0; i < 4; ++i) {
    double v = 1.0;
    for (int k = 0; k < 4; ++k)
      if (k != i) v *= (x - nodes[k]) / (nodes[i] - nodes[k]);
    w[i] = v;
  }
  return w;
}

// Uniformly spaced frame times; returns spacing.
double frame_spacing(const std::vector<double>& times) {
  if (times.size() < 4) fail(ErrorKind::precondition, "boost needs at least four recorded frames");
  const double h = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(h > 0.0)) fail(ErrorKind::precondition, "frame times must increase");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - (times.front() + static_cast<double>(i) * h)) > 1e-9 * std::max(1.0, std::abs(h * i)))
      fail(ErrorKind::precondition, "frames must be equally spaced in time");
  return h;
}

// First of the four frames used for cubic interpolation at t.
std::size_t window_start(double t, double t0, double h, std::size_t lo, std::size_t hi) {
  const double s = std::floor((t - t0) / h) - 1.0;
  const double clamped = std::clamp(s, static_cast<double>(lo), static_cast<double>(hi - 3));
  return static_cast<std::size_t>(clamped);
}

// Spectral-in-z, cubic-in-t interpolation of several complex channels stored per frame.
class Sampler {
 public:
  Sampler(const GridSpec& grid, std::vector<double> times, const std::vector<std::vector<std::vector<cplx>>>& data)
      : grid_(grid), spectral_(grid), times_(std::move(times)), raw_(data) {
    h_ = frame_spacing(times_);
    coeffs_.resize(data.size());
    for (std::size_t f = 0; f < data.size(); ++f)
      for (const auto& ch : data[f]) coeffs_[f].push_back(spectral_.interpolant(ch, grid.z(0)).coeffs);
  }

  std::vector<cplx> eval(double t, double z) const {
    const std::size_t n_ch = raw_.front().size();
    const std::size_t i0 = window_start(t, times_.front(), h_, 0, times_.size() - 1);
    const std::array<double, 4> w =
        lagrange_weights(t, {times_[i0], times_[i0 + 1], times_[i0 + 2], times_[i0 + 3]});

    const double s = (z - grid_.z(0)) / grid_.dx;
    const bool on_grid = s == std::round(s) && s >= 0.0 && s < static_cast<double>(grid_.n_points);
    const std::size_t n = grid_.n_points;
    std::vector<cplx> phasor;
    if (!on_grid) {
      const auto& k = spectral_.wavenumbers();
      const double d = z - grid_.z(0);
      phasor.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        phasor[i] = i == n / 2 ? cplx(std::cos(k[i] * d), 0.0) : std::polar(1.0, k[i] * d);
    }

    std::vector<cplx> out(n_ch, 0.0);
    for (int q = 0; q < 4; ++q) {
      if (w[q] == 0.0) continue;
      const std::size_t f = i0 + q;
      for (std::size_t c = 0; c < n_ch; ++c) {
        cplx v = 0.0;
        if (on_grid) {
          v = raw_[f][c][static_cast<std::size_t>(s)];
        } else {
          const auto& co = coeffs_[f][c];
          for (std::size_t i = 0; i < n; ++i) v += co[i] * phasor[i];
        }
        out[c] += w[q] * v;
      }
    }
    return out;
  }

 private:
  GridSpec grid_;
  Spectral spectral_;
  std::vector<double> times_;
  const std::vector<std::vector<std::vector<cplx>>>& raw_;
  std::vector<std::vector<std::vector<cplx>>> coeffs_;
  double h_ = 0.0;
};

std::vector<double> frame_times(const Trajectory& traj) {
  std::vector<double> t;
  for (const auto& f : traj.frames) t.push_back(f.time());
  return t;
}

std::vector<std::vector<std::vector<cplx>>> spinor_channels(const Trajectory& traj) {
  std::vector<std::vector<std::vector<cplx>>> d;
  for (const auto& f : traj.frames) {
    std::vector<std::vector<cplx>> ch;
    for (int c = 0; c < 4; ++c) ch.emplace_back(f.component(c).begin(), f.component(c).end());
    d.push_back(std::move(ch));
  }
  return d;
}

void check_trajectory(const Trajectory& traj) {
  if (traj.frames.empty()) fail(ErrorKind::precondition, "boost needs a recorded trajectory");
  for (const auto& f : traj.frames)
    if (f.n_components() != 4) fail(ErrorKind::invalid_argument, "boost needs 4-component frames");
}

void require_coverage(const Trajectory& traj, const BoostSpec& boost, const PrimedSlices& slices) {
  const Coverage c = coverage(traj, boost, slices);
  if (!c.ok) fail(ErrorKind::domain, c.describe());
}

VquStats stats(const std::vector<double>& primed, const std::vector<double>& orig, const std::vector<std::uint8_t>& use) {
  VquStats s;
  double sum2 = 0.0;
  std::size_t n = 0;
  for (std::size_t j = 0; j < primed.size(); ++j) {
    if (!use[j]) continue;
    const double d = primed[j] - orig[j];
    s.max_abs = std::max(s.max_abs, std::abs(d));
    s.scale = std::max(s.scale, std::abs(primed[j]));
    sum2 += d * d;
    ++n;
  }
  s.rms = n ? std::sqrt(sum2 / static_cast<double>(n)) : 0.0;
  return s;
}

}  // namespace

BoostSpec make_boost(double beta, Representation rep) {
  if (!(std::abs(beta) < 1.0)) fail(ErrorKind::invalid_argument, "boost velocity must lie in (-1, 1)");
  BoostSpec b;
  b.beta = beta;
  b.gamma = 1.0 / std::sqrt(1.0 - beta * beta);
  b.rapidity = std::atanh(beta);
  b.representation = rep;
  const GammaSet g = build_gammas(rep);
  // (chi^0 chi^3)^2 = 1, so the exponential is cosh - sinh times the generator.
  const Mat4 gen = g.chi[0] * g.chi[3];
  b.spinor_boost = std::cosh(0.5 * b.rapidity) * Mat4::Identity() - std::sinh(0.5 * b.rapidity) * gen;
  b.lambda.setIdentity();
  b.lambda(0, 0) = b.gamma;
  b.lambda(3, 3) = b.gamma;
  b.lambda(0, 3) = -b.gamma * beta;
  b.lambda(3, 0) = -b.gamma * beta;
  return b;
}

std::array<double, 2> unprimed_event(const BoostSpec& b, double t_prime, double z_prime) {
  return {b.gamma * (t_prime + b.beta * z_prime), b.gamma * (z_prime + b.beta * t_prime)};
}

std::array<double, 2> primed_event(const BoostSpec& b, double t, double z) {
  return {b.gamma * (t - b.beta * z), b.gamma * (z - b.beta * t)};
}

std::string Coverage::describe() const {
  std::ostringstream os;
  os << "primed slices need t in [" << t_min << ", " << t_max << "], z in [" << z_min << ", " << z_max
     << "]; trajectory records t in [" << recorded_t_min << ", " << recorded_t_max << "], z in [" << recorded_z_min
     << ", " << recorded_z_max << "]";
  if (!ok) {
    os << "; missing:";
    if (t_min < recorded_t_min) os << " t in [" << t_min << ", " << recorded_t_min << ")";
    if (t_max > recorded_t_max) os << " t in (" << recorded_t_max << ", " << t_max << "]";
    if (z_min < recorded_z_min) os << " z in [" << z_min << ", " << recorded_z_min << ")";
    if (z_max > recorded_z_max) os << " z in (" << recorded_z_max << ", " << z_max << "]";
  }
  return os.str();
}

Coverage coverage(const Trajectory& traj, const BoostSpec& boost, const PrimedSlices& slices) {
  check_trajectory(traj);
  if (slices.times.empty()) fail(ErrorKind::invalid_argument, "no primed slice times");
  validate(slices.grid);
  const GridSpec& g = traj.frames.front().grid();
  Coverage c;
  c.recorded_t_min = traj.frames.front().time();
  c.recorded_t_max = traj.frames.back().time();
  c.recorded_z_min = g.z(0);
  c.recorded_z_max = g.z(g.n_points - 1);
  c.t_min = c.z_min = std::numeric_limits<double>::infinity();
  c.t_max = c.z_max = -std::numeric_limits<double>::infinity();
  const double zp[2] = {slices.grid.z(0), slices.grid.z(slices.grid.n_points - 1)};
  for (double tp : slices.times)
    for (double z : zp) {
      const auto e = unprimed_event(boost, tp, z);
      c.t_min = std::min(c.t_min, e[0]);
      c.t_max = std::max(c.t_max, e[0]);
      c.z_min = std::min(c.z_min, e[1]);
      c.z_max = std::max(c.z_max, e[1]);
    }
  const double tol = 1e-12 * std::max(1.0, std::abs(c.recorded_t_max));
  c.ok = c.t_min >= c.recorded_t_min - tol && c.t_max <= c.recorded_t_max + tol && c.z_min >= c.recorded_z_min &&
         c.z_max <= c.recorded_z_max;
  return c;
}

BoostedTrajectory boost_field(const Trajectory& traj, const BoostSpec& boost_in, const PrimedSlices& slices,
                              unsigned threads) {
  check_trajectory(traj);
  const Representation rep = traj.frames.front().representation();
  const BoostSpec boost = boost_in.representation == rep ? boost_in : make_boost(boost_in.beta, rep);
  require_coverage(traj, boost, slices);

  const auto data = spinor_channels(traj);
  const Sampler sampler(traj.frames.front().grid(), frame_times(traj), data);

  BoostedTrajectory out;
  out.boost = boost;
  out.grid = slices.grid;
  const std::size_t n = slices.grid.n_points;
  for (double tp : slices.times) {
    SpinorField psi(slices.grid, 4, tp, rep);
    parallel_for(
        n,
        [&](std::size_t j) {
          const auto e = unprimed_event(boost, tp, slices.grid.z(j));
          const auto v = sampler.eval(e[0], e[1]);
          const Eigen::Vector4cd u = boost.spinor_boost * Eigen::Vector4cd(v[0], v[1], v[2], v[3]);
          for (int c = 0; c < 4; ++c) psi(c, j) = u(c);
        },
        threads);
    out.slices.push_back(std::move(psi));
  }
  return out;
}

CovarianceReport current_covariance_check(const Trajectory& traj, const BoostSpec& boost_in,
                                          const PrimedSlices& slices, unsigned threads) {
  const BoostedTrajectory bt = boost_field(traj, boost_in, slices, threads);
  const BoostSpec& boost = bt.boost;
  const GammaSet g = build_gammas(bt.boost.representation);

  std::vector<std::vector<std::vector<cplx>>> jdata;
  for (const auto& f : traj.frames) {
    const auto j = current(f, g);
    std::vector<std::vector<cplx>> ch;
    for (int mu = 0; mu < 4; ++mu) ch.emplace_back(j[mu].begin(), j[mu].end());
    jdata.push_back(std::move(ch));
  }
  const Sampler sampler(traj.frames.front().grid(), frame_times(traj), jdata);

  CovarianceReport rep;
  const GridSpec& g0 = traj.frames.front().grid();
  for (double r : density(traj.frames.front())) rep.charge += r * g0.dx;

  const std::size_t n = slices.grid.n_points;
  for (std::size_t s = 0; s < bt.slices.size(); ++s) {
    const auto jp = current(bt.slices[s], g);
    const double tp = slices.times[s];
    std::vector<std::array<double, 4>> expected(n);
    parallel_for(
        n,
        [&](std::size_t j) {
          const auto e = unprimed_event(boost, tp, slices.grid.z(j));
          const auto v = sampler.eval(e[0], e[1]);
          const Eigen::Vector4d jv(v[0].real(), v[1].real(), v[2].real(), v[3].real());
          const Eigen::Vector4d lj = boost.lambda * jv;
          for (int mu = 0; mu < 4; ++mu) expected[j][mu] = lj(mu);
        },
        threads);
    double scale = 0.0, q = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      scale = std::max(scale, std::abs(jp[0][j]));
      q += jp[0][j] * slices.grid.dx;
    }
    for (int mu = 0; mu < 4; ++mu)
      for (std::size_t j = 0; j < n; ++j)
        rep.deviation[mu] = std::max(rep.deviation[mu], std::abs(jp[mu][j] - expected[j][mu]) / scale);
    rep.primed_charge.push_back(q);
    rep.max_charge_error = std::max(rep.max_charge_error, std::abs(q - rep.charge) / std::abs(rep.charge));
  }
  for (double d : rep.deviation) rep.max_deviation = std::max(rep.max_deviation, d);
  return rep;
}

VquReport vqu_invariance_check(const Trajectory& traj, const BoostSpec& boost_in, const GridSpec& primed_grid,
                               double t_prime, double h_prime, double core_fraction, unsigned threads) {
  if (!(h_prime > 0.0)) fail(ErrorKind::invalid_argument, "primed time step must be > 0");
  const PrimedSlices slices{primed_grid, {t_prime - h_prime, t_prime, t_prime + h_prime}};
  const BoostedTrajectory bt = boost_field(traj, boost_in, slices, threads);
  const BoostSpec& boost = bt.boost;

  const HydroFrame pm = extract(bt.slices[0]);
  const HydroFrame pc = extract(bt.slices[1]);
  const HydroFrame pp = extract(bt.slices[2]);
  const QuantumPotential qp = quantum_potential(pm, pc, pp);

  // Original-frame fields on the stored frames that the bicubic stencils touch.
  const std::vector<double> times = frame_times(traj);
  const double h = frame_spacing(times);
  const GridSpec& g0 = traj.frames.front().grid();
  const std::size_t n0 = g0.n_points, nf = times.size();
  const std::size_t n = primed_grid.n_points;
  if (nf < 6) fail(ErrorKind::precondition, "V check needs at least six recorded frames");

  std::vector<std::array<double, 2>> events(n);
  std::size_t f_lo = nf, f_hi = 0;
  for (std::size_t j = 0; j < n; ++j) {
    events[j] = unprimed_event(boost, t_prime, primed_grid.z(j));
    const std::size_t i0 = window_start(events[j][0], times.front(), h, 1, nf - 2);
    f_lo = std::min(f_lo, i0);
    f_hi = std::max(f_hi, i0 + 3);
  }
  std::map<std::size_t, HydroFrame> hydro;
  for (std::size_t f = f_lo - 1; f <= f_hi + 1; ++f) hydro.emplace(f, extract(traj.frames[f]));
  struct Stored {
    std::array<Field, 4> V, rhoV;
    std::array<std::vector<std::uint8_t>, 4> valid;
  };
  std::map<std::size_t, Stored> stored;
  for (std::size_t f = f_lo; f <= f_hi; ++f) {
    const HydroFrame& cur = hydro.at(f);
    const QuantumPotential q = quantum_potential(hydro.at(f - 1), cur, hydro.at(f + 1));
    Stored s;
    s.valid = q.component_valid;
    for (int a = 0; a < 4; ++a) {
      s.V[a] = q.V[a];
      s.rhoV[a].resize(n0);
      for (std::size_t j = 0; j < n0; ++j) s.rhoV[a][j] = cur.rho[j] * q.V[a][j];
    }
    stored.emplace(f, std::move(s));
  }

  const double rho_max = *std::max_element(pc.rho.begin(), pc.rho.end());
  VquReport rep;
  rep.beta = boost.beta;
  rep.t_prime = t_prime;
  std::array<Field, 4> orig_V, orig_rhoV, primed_V, primed_rhoV;
  std::array<std::vector<std::uint8_t>, 4> use;
  for (int a = 0; a < 4; ++a) {
    orig_V[a].assign(n, 0.0);
    orig_rhoV[a].assign(n, 0.0);
    use[a].assign(n, 0);
    primed_V[a] = qp.V[a];
    primed_rhoV[a].resize(n);
    for (std::size_t j = 0; j < n; ++j) primed_rhoV[a][j] = pc.rho[j] * qp.V[a][j];
  }
  parallel_for(
      n,
      [&](std::size_t j) {
        const double t = events[j][0], z = events[j][1];
        const std::size_t i0 = window_start(t, times.front(), h, 1, nf - 2);
        const auto wt = lagrange_weights(t, {times[i0], times[i0 + 1], times[i0 + 2], times[i0 + 3]});
        const double s = (z - g0.z(0)) / g0.dx;
        const long k0 = static_cast<long>(std::floor(s)) - 1;
        const long nl = static_cast<long>(n0);
        std::array<double, 4> zn{};
        std::array<std::size_t, 4> idx{};
        for (int q = 0; q < 4; ++q) {
          zn[q] = static_cast<double>(k0 + q);
          idx[q] = static_cast<std::size_t>(((k0 + q) % nl + nl) % nl);
        }
        const auto wz = lagrange_weights(s, zn);
        for (int a = 0; a < 4; ++a) {
          if (!qp.component_valid[a][j] || pc.rho[j] < core_fraction * rho_max) continue;
          double v = 0.0, rv = 0.0;
          bool ok = true;
          for (int p = 0; p < 4 && ok; ++p) {
            const Stored& st = stored.at(i0 + p);
            for (int q = 0; q < 4; ++q) {
              if (!st.valid[a][idx[q]]) {
                ok = false;
                break;
              }
              const double w = wt[p] * wz[q];
              v += w * st.V[a][idx[q]];
              rv += w * st.rhoV[a][idx[q]];
            }
          }
          if (!ok) continue;
          orig_V[a][j] = v;
          orig_rhoV[a][j] = rv;
          use[a][j] = 1;
        }
      },
      threads);

  std::size_t primed_valid = 0;
  std::vector<std::uint8_t> any(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    bool pv = false;
    for (int a = 0; a < 4; ++a) {
      pv = pv || (qp.component_valid[a][j] && pc.rho[j] >= core_fraction * rho_max);
      if (use[a][j]) any[j] = 1;
    }
    primed_valid += pv ? 1 : 0;
    rep.compared_points += any[j];
  }
  rep.mask_overlap = primed_valid ? static_cast<double>(rep.compared_points) / static_cast<double>(primed_valid) : 0.0;
  rep.low_overlap = rep.mask_overlap < 0.5;
  rep.z_prime = primed_grid.coordinates();
  Field sum_p(n, 0.0), sum_o(n, 0.0);
  for (int a = 0; a < 4; ++a) {
    rep.V[a] = stats(primed_V[a], orig_V[a], use[a]);
    rep.rho_V[a] = stats(primed_rhoV[a], orig_rhoV[a], use[a]);
    rep.deviation[a].assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (!use[a][j]) continue;
      rep.deviation[a][j] = primed_V[a][j] - orig_V[a][j];
      sum_p[j] += primed_V[a][j];
      sum_o[j] += orig_V[a][j];
    }
  }
  rep.contraction = stats(sum_p, sum_o, any);
  return rep;
}

}  // namespace qhd
