#include "qhd/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qhd/error.hpp"
#include "qhd/evolve.hpp"
#include "qhd/gamma.hpp"
#include "qhd/packets.hpp"
#include "qhd/spectral.hpp"

namespace qhd {

namespace {

double max_of(const Field& f) { return f.empty() ? 0.0 : *std::max_element(f.begin(), f.end()); }

void require_two(const SpinorField& xi) {
  if (xi.n_components() != 2) fail(ErrorKind::invalid_argument, "Pauli state needs a 2-component field");
}

// Returns the uniform value of A(t) or throws.
double uniform_A(const EMFieldSet& em, double t) {
  const Field a = em.A_at(t);
  for (double v : a)
    if (v != a[0]) fail(ErrorKind::precondition, "Pauli propagation supports only a spatially uniform A");
  return a.empty() ? 0.0 : a[0];
}

Field unwrap(std::span<const cplx> c, const std::vector<std::uint8_t>& valid) {
  Field s(c.size(), 0.0);
  bool started = false;
  double last_arg = 0.0, last = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (!valid[j]) continue;
    const double arg = std::arg(c[j]);
    double d = arg - last_arg;
    d -= 2.0 * std::numbers::pi * std::round(d / (2.0 * std::numbers::pi));
    s[j] = started ? last + d : arg;
    started = true;
    last_arg = arg;
    last = s[j];
  }
  return s;
}

struct Flux {
  Field rho, drho, J, dJ;  // J = Im(xi^dagger xi') / m - e A rho / m
};

Flux flux(const SpinorField& xi, const EMFieldSet& em) {
  const std::size_t n = xi.n_points();
  const SpinorField d1 = grad(xi);
  const SpinorField d2 = laplacian(xi);
  const Field a = em.A_at(xi.time());
  Flux f;
  f.rho.assign(n, 0.0);
  f.drho.assign(n, 0.0);
  f.J.assign(n, 0.0);
  f.dJ.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double im1 = 0.0, im2 = 0.0;
    for (int c = 0; c < 2; ++c) {
      const cplx p = xi(c, j);
      f.rho[j] += std::norm(p);
      f.drho[j] += 2.0 * (std::conj(p) * d1(c, j)).real();
      im1 += (std::conj(p) * d1(c, j)).imag();
      im2 += (std::conj(p) * d2(c, j)).imag();
    }
    const double e = em.charge, m = em.mass;
    f.J[j] = (im1 - e * a[j] * f.rho[j]) / m;
    f.dJ[j] = (im2 - e * (em.grad_A[j] * f.rho[j] + a[j] * f.drho[j])) / m;
  }
  return f;
}

}  // namespace

PauliState make_pauli_state(const SpinorField& xi, const std::array<double, 3>& B_ext, double mu) {
  require_two(xi);
  PauliState s;
  s.xi = xi;
  s.B_ext = B_ext;
  s.mu = mu;
  return s;
}

double effective_mu(const PauliState& s, const EMFieldSet& em) {
  if (!std::isnan(s.mu)) return s.mu;
  if (!(em.mass > 0.0)) fail(ErrorKind::invalid_argument, "default magnetic moment needs m > 0");
  return em.charge / (2.0 * em.mass);
}

SpinAngles spin_angles(const PauliState& s) {
  require_two(s.xi);
  const std::size_t n = s.xi.n_points();
  const Decomposition d = decompose(s.xi);
  SpinAngles out;
  out.amplitude.assign(n, 0.0);
  out.action.assign(n, 0.0);
  out.theta.assign(n, 0.0);
  out.phi.assign(n, 0.0);
  out.valid.assign(n, 0);
  out.phi_valid.assign(n, 0);
  const Field u1 = unwrap(s.xi.component(0), d.valid[0]);
  const Field u2 = unwrap(s.xi.component(1), d.valid[1]);
  Field amp2(n);
  for (std::size_t j = 0; j < n; ++j) amp2[j] = d.R[0][j] * d.R[0][j] + d.R[1][j] * d.R[1][j];
  const double floor = node_threshold * node_threshold * max_of(amp2);
  for (std::size_t j = 0; j < n; ++j) {
    if (floor == 0.0 || amp2[j] < floor) continue;
    out.valid[j] = 1;
    out.amplitude[j] = std::sqrt(amp2[j]);
    out.theta[j] = 2.0 * std::atan2(d.R[1][j], d.R[0][j]);
    const bool v1 = d.valid[0][j], v2 = d.valid[1][j];
    if (v1 && v2) {
      out.phi_valid[j] = 1;
      out.phi[j] = u2[j] - u1[j];
      out.action[j] = 0.5 * (u1[j] + u2[j]);
    } else if (v1) {
      out.action[j] = u1[j];  // theta = 0: phi is undefined and absorbed into S
    } else {
      out.action[j] = u2[j];
    }
  }
  return out;
}

SpinorField reconstruct(const SpinAngles& a, const PauliState& like) {
  SpinorField xi(like.grid(), 2, like.time());
  for (std::size_t j = 0; j < a.amplitude.size(); ++j) {
    if (!a.valid[j]) continue;
    const double h = 0.5 * a.phi[j];
    xi(0, j) = std::polar(a.amplitude[j] * std::cos(0.5 * a.theta[j]), a.action[j] - h);
    xi(1, j) = std::polar(a.amplitude[j] * std::sin(0.5 * a.theta[j]), a.action[j] + h);
  }
  return xi;
}

std::array<Field, 3> spin_direction(const PauliState& s) {
  require_two(s.xi);
  const std::size_t n = s.xi.n_points();
  const auto& sig = pauli_matrices();
  std::array<Field, 3> out;
  for (auto& f : out) f.assign(n, 0.0);
  const Field rho = density(s.xi);
  const double floor = node_threshold * node_threshold * max_of(rho);
  for (std::size_t j = 0; j < n; ++j) {
    if (floor == 0.0 || rho[j] < floor) continue;
    const Eigen::Vector2cd v(s.xi(0, j), s.xi(1, j));
    for (int i = 0; i < 3; ++i) out[i][j] = v.dot(sig[i + 1] * v).real() / rho[j];
  }
  return out;
}

std::array<double, 3> mean_spin(const PauliState& s) {
  const auto& sig = pauli_matrices();
  std::array<double, 3> m{0.0, 0.0, 0.0};
  double w = 0.0;
  for (std::size_t j = 0; j < s.xi.n_points(); ++j) {
    const Eigen::Vector2cd v(s.xi(0, j), s.xi(1, j));
    for (int i = 0; i < 3; ++i) m[i] += v.dot(sig[i + 1] * v).real();
    w += v.squaredNorm();
  }
  for (auto& x : m) x /= w;
  return m;
}

PauliState pauli_step(const PauliState& s, const EMFieldSet& em, double dt, std::size_t step_index) {
  require_two(s.xi);
  require_same_space(s.grid(), em.grid, "pauli_step");
  if (!(em.mass > 0.0)) fail(ErrorKind::invalid_argument, "Pauli propagation needs m > 0");
  PauliState out = s;
  SpinorField& xi = out.xi;
  const std::size_t n = xi.n_points();
  const double e = em.charge, m = em.mass;
  const double a = uniform_A(em, s.time() + 0.5 * dt);

  auto half_potential = [&] {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx ph = std::polar(1.0, -0.5 * dt * e * em.W[j]);
      xi(0, j) *= ph;
      xi(1, j) *= ph;
    }
  };

  half_potential();
  const Spectral sp(xi.grid());
  const auto& ks = sp.wavenumbers();
  std::vector<cplx> spec(n);
  for (int c = 0; c < 2; ++c) {
    sp.forward(xi.component(c), spec);
    for (std::size_t i = 0; i < n; ++i) {
      const double kk = ks[i] - e * a;
      spec[i] *= std::polar(1.0, -kk * kk * dt / (2.0 * m));
    }
    sp.backward(spec, xi.component(c));
  }
  half_potential();

  // exp(-i mu B.sigma dt) = cos(w) - i sin(w) (B.sigma)/|B|, w = mu |B| dt
  const double bmag = std::hypot(s.B_ext[0], s.B_ext[1], s.B_ext[2]);
  if (bmag > 0.0) {
    const auto& sig = pauli_matrices();
    const double w = effective_mu(s, em) * bmag * dt;
    Mat2 bs = Mat2::Zero();
    for (int i = 0; i < 3; ++i) bs += (s.B_ext[i] / bmag) * sig[i + 1];
    const Mat2 rot = std::cos(w) * Mat2::Identity() - cplx(0.0, std::sin(w)) * bs;
    for (std::size_t j = 0; j < n; ++j) {
      const Eigen::Vector2cd v = rot * Eigen::Vector2cd(xi(0, j), xi(1, j));
      xi(0, j) = v(0);
      xi(1, j) = v(1);
    }
  }
  xi.set_time(s.time() + dt);
  if (!xi.all_finite()) throw BlowupError(step_index, "non-finite value in Pauli step");
  return out;
}

std::vector<PauliState> pauli_evolve(const PauliState& s0, const EMFieldSet& em, double dt, std::size_t n_steps,
                                     std::size_t record_every) {
  if (!(dt > 0.0)) fail(ErrorKind::invalid_argument, "dt must be > 0");
  if (record_every < 1) fail(ErrorKind::invalid_argument, "record_every must be >= 1");
  std::vector<PauliState> frames{s0};
  PauliState s = s0;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    s = pauli_step(s, em, dt, k);
    s.xi.set_time(s0.time() + static_cast<double>(k) * dt);
    if (k % record_every == 0) frames.push_back(s);
  }
  return frames;
}

ContinuityVelocity continuity_velocity(const PauliState& s, const EMFieldSet& em) {
  require_two(s.xi);
  require_same_space(s.grid(), em.grid, "continuity_velocity");
  const std::size_t n = s.xi.n_points();
  const Flux f = flux(s.xi, em);
  const SpinorField d1 = grad(s.xi);
  const SpinAngles ang = spin_angles(s);
  const Field a = em.A_at(s.time());
  const double m = em.mass, e = em.charge;
  ContinuityVelocity v;
  v.orbital.assign(n, 0.0);
  v.spin.assign(n, 0.0);
  v.total.assign(n, 0.0);
  v.valid = ang.valid;
  for (std::size_t j = 0; j < n; ++j) {
    if (!v.valid[j]) continue;
    v.total[j] = f.J[j] / f.rho[j];
    if (!ang.phi_valid[j]) {
      v.orbital[j] = v.total[j];
      continue;
    }
    double g[2];
    for (int c = 0; c < 2; ++c) g[c] = (std::conj(s.xi(c, j)) * d1(c, j)).imag() / std::norm(s.xi(c, j));
    const double grad_s = 0.5 * (g[0] + g[1]);
    const double grad_phi = g[1] - g[0];
    v.orbital[j] = (grad_s - e * a[j]) / m;
    v.spin[j] = -std::cos(ang.theta[j]) * grad_phi / (2.0 * m);
  }
  return v;
}

MadelungPotential madelung_potential(const Field& rho, const GridSpec& grid, double mass, double rel_floor) {
  if (rho.size() != grid.n_points) fail(ErrorKind::grid_mismatch, "madelung_potential size mismatch");
  if (!(mass > 0.0)) fail(ErrorKind::invalid_argument, "madelung_potential needs m > 0");
  const std::size_t n = rho.size();
  Field f(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (rho[j] < 0.0) fail(ErrorKind::invalid_argument, "madelung_potential: negative density");
    f[j] = std::sqrt(rho[j]);
  }
  const Spectral sp(grid);
  const Field f1 = sp.derivative(std::span<const double>(f), 1);
  const Field f2 = sp.derivative(std::span<const double>(f), 2);
  const Field f3 = sp.derivative(std::span<const double>(f), 3);
  const double cut = rel_floor * max_of(rho);
  MadelungPotential out;
  out.V.assign(n, 0.0);
  out.grad_V.assign(n, 0.0);
  out.valid.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (rho[j] == 0.0 || rho[j] < cut) continue;
    out.valid[j] = 1;
    out.V[j] = -f2[j] / (2.0 * mass * f[j]);
    out.grad_V[j] = -(f3[j] * f[j] - f2[j] * f1[j]) / (2.0 * mass * f[j] * f[j]);
  }
  return out;
}

ClassicalForceReport classical_force_check(const std::vector<PauliState>& frames, const EMFieldSet& em,
                                           double core_fraction) {
  if (frames.size() < 3) fail(ErrorKind::precondition, "classical_force_check needs at least 3 frames");
  const std::size_t i = frames.size() / 2;
  const PauliState& prev = frames[i - 1];
  const PauliState& cur = frames[i];
  const PauliState& next = frames[i + 1];
  const double h = cur.time() - prev.time();
  if (!(h > 0.0) || std::abs((next.time() - cur.time()) - h) > 1e-9 * h)
    fail(ErrorKind::invalid_argument, "classical_force_check needs equally spaced frames");
  require_same_space(cur.grid(), em.grid, "classical_force_check");

  const Flux fp = flux(prev.xi, em), fc = flux(cur.xi, em), fn = flux(next.xi, em);
  const MadelungPotential vq = madelung_potential(fc.rho, cur.grid(), em.mass);
  const std::size_t n = fc.rho.size();
  const double e = em.charge, m = em.mass;
  const double cut = core_fraction * max_of(fc.rho);

  ClassicalForceReport r;
  r.residual.assign(n, 0.0);
  double w = 0.0, s2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!vq.valid[j] || fc.rho[j] < cut || fp.rho[j] < cut || fn.rho[j] < cut) continue;
    const double v = fc.J[j] / fc.rho[j];
    const double dv = (fc.dJ[j] * fc.rho[j] - fc.J[j] * fc.drho[j]) / (fc.rho[j] * fc.rho[j]);
    const double dtv = (fn.J[j] / fn.rho[j] - fp.J[j] / fp.rho[j]) / (2.0 * h);
    const double lhs = dtv + v * dv;
    const double rhs = -(e / m) * (em.grad_W[j] + em.dA_dt[j]) - vq.grad_V[j] / m;
    const double res = lhs - rhs;
    r.residual[j] = res;
    ++r.core_points;
    w += fc.rho[j];
    s2 += fc.rho[j] * res * res;
    r.max_abs = std::max(r.max_abs, std::abs(res));
  }
  r.weighted_l2 = w > 0.0 ? std::sqrt(s2 / w) : 0.0;

  auto mean_v = [](const Flux& f) {
    double sj = 0.0, sr = 0.0;
    for (std::size_t j = 0; j < f.J.size(); ++j) {
      sj += f.J[j];
      sr += f.rho[j];
    }
    return sj / sr;
  };
  r.mean_accel = (mean_v(fn) - mean_v(fp)) / (2.0 * h);
  double sf = 0.0, sr = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sf += fc.rho[j] * (em.grad_W[j] + em.dA_dt[j]);
    sr += fc.rho[j];
  }
  r.expected_accel = -(e / m) * sf / sr;
  return r;
}

MatchedStates matched_states(const GridSpec& grid, double z0, double sigma, double v, double mass,
                             const std::array<cplx, 2>& spin) {
  if (!(std::abs(v) < 1.0)) fail(ErrorKind::invalid_argument, "|v| must be < 1");
  const double kd = mass * v / std::sqrt(1.0 - v * v);
  const double kp = mass * v;
  MatchedStates out;
  SpinorField psi(grid, 4, grid.t0, Representation::chiral_as_paper);
  for (int pair = 0; pair < 2; ++pair) {
    if (spin[pair] == cplx(0.0)) continue;
    const SpinorField part = branch_packet(grid, z0, sigma, kd, mass, 1, pair, Representation::chiral_as_paper);
    for (std::size_t i = 0; i < psi.data().size(); ++i) psi.data()[i] += spin[pair] * part.data()[i];
  }
  normalize(psi);
  out.dirac = psi;
  const auto env = gaussian_envelope(grid, z0, sigma, kp);
  SpinorField xi(grid, 2, grid.t0);
  for (int c = 0; c < 2; ++c)
    for (std::size_t j = 0; j < grid.n_points; ++j) xi(c, j) = spin[c] * env[j];
  normalize(xi);
  out.pauli = make_pauli_state(xi);
  return out;
}

DiracPauliComparison dirac_vs_pauli(const SpinorField& psi0, const PauliState& pauli0, const EMFieldSet& em,
                                    double T_final, std::size_t n_steps) {
  if (n_steps < 1 || !(T_final > 0.0)) fail(ErrorKind::invalid_argument, "dirac_vs_pauli needs T > 0 and n_steps >= 1");
  require_same_space(psi0.grid(), pauli0.grid(), "dirac_vs_pauli");
  DiracPauliComparison r;
  r.t_final = T_final;
  r.negative_energy_weight = branch_weight(psi0, em.mass, -1, em.charge * uniform_A(em, psi0.time()));
  if (r.negative_energy_weight > 1e-3)
    fail(ErrorKind::precondition, "Dirac initial state has negative-energy weight " +
                                      std::to_string(r.negative_energy_weight) + " > 1e-3");
  const double dt = T_final / static_cast<double>(n_steps);
  SpinorField psi = psi0;
  const DiracStepper stepper(em, build_gammas(psi0.representation()));
  PauliState s = pauli0;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    stepper.advance(psi, dt, k);
    s = pauli_step(s, em, dt, k);
  }

  const HydroFrame f = extract(psi);
  const Field rho_p = density(s.xi);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < rho_p.size(); ++j) {
    num += (f.rho[j] - rho_p[j]) * (f.rho[j] - rho_p[j]);
    den += rho_p[j] * rho_p[j];
  }
  r.rho_distance = std::sqrt(num / den);

  const ContinuityVelocity v = continuity_velocity(s, em);
  double sw = 0.0, sv = 0.0;
  for (std::size_t j = 0; j < rho_p.size(); ++j) {
    if (!v.valid[j] || !f.valid[j]) continue;
    const double d = f.qdot[j] - v.total[j];
    sv += rho_p[j] * d * d;
    sw += rho_p[j];
  }
  r.velocity_distance = sw > 0.0 ? std::sqrt(sv / sw) : 0.0;
  return r;
}

}  // namespace qhd
