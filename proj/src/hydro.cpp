#include "qhd/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qhd/error.hpp"
#include "qhd/spectral.hpp"

namespace qhd {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap(double d) {
  while (d > std::numbers::pi) d -= two_pi;
  while (d <= -std::numbers::pi) d += two_pi;
  return d;
}

double time_step(const HydroFrame& prev, const HydroFrame& cur, const HydroFrame& next) {
  require_same_space(prev.grid, cur.grid, "hydro time difference");
  require_same_space(next.grid, cur.grid, "hydro time difference");
  const double h1 = cur.time - prev.time;
  const double h2 = next.time - cur.time;
  if (!(h1 > 0.0) || std::abs(h1 - h2) > 1e-9 * std::abs(h1))
    fail(ErrorKind::invalid_argument, "central difference needs three equally spaced, increasing frames");
  return h1;
}

double max_of(const Field& f) { return f.empty() ? 0.0 : *std::max_element(f.begin(), f.end()); }

}  // namespace

Decomposition decompose(const SpinorField& psi) {
  if (!psi.all_finite()) fail(ErrorKind::invalid_argument, "decompose: field has non-finite entries");
  const std::size_t n = psi.n_points();
  const std::size_t nc = psi.n_components();
  Decomposition d;
  d.R.assign(nc, Field(n, 0.0));
  d.S.assign(nc, Field(n, 0.0));
  d.valid.assign(nc, std::vector<std::uint8_t>(n, 0));
  d.seams.assign(nc, {});
  d.winding.assign(nc, 0);
  d.all_masked.assign(nc, true);

  for (std::size_t a = 0; a < nc; ++a) {
    auto c = psi.component(a);
    double rmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      d.R[a][j] = std::abs(c[j]);
      rmax = std::max(rmax, d.R[a][j]);
    }
    if (rmax == 0.0) continue;
    const double eps = node_threshold * rmax;
    for (std::size_t j = 0; j < n; ++j) d.valid[a][j] = d.R[a][j] >= eps;

    bool started = false;
    bool in_gap = false;
    double last_arg = 0.0, last_s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!d.valid[a][j]) {
        in_gap = started;
        continue;
      }
      const double arg = std::arg(c[j]);
      double s;
      if (!started) {
        s = arg;
        started = true;
      } else if (in_gap) {
        s = arg + two_pi * std::round((last_s - arg) / two_pi);
        d.seams[a].push_back(j);
        in_gap = false;
      } else {
        s = last_s + wrap(arg - last_arg);
      }
      d.S[a][j] = s;
      last_arg = arg;
      last_s = s;
    }
    d.all_masked[a] = !started;
    if (started && d.valid[a][n - 1] && d.valid[a][0]) {
      const double closure = d.S[a][n - 1] + wrap(std::arg(c[0]) - std::arg(c[n - 1])) - d.S[a][0];
      d.winding[a] = std::lround(closure / two_pi);
      if (d.winding[a] != 0) d.seams[a].insert(d.seams[a].begin(), 0);
    }
  }
  return d;
}

std::array<Field, 4> current(const SpinorField& psi, const GammaSet& gammas) {
  if (psi.n_components() != 4) fail(ErrorKind::invalid_argument, "current needs 4 components");
  if (psi.representation() != gammas.representation)
    fail(ErrorKind::invalid_argument, "field and gamma set use different representations");
  const std::size_t n = psi.n_points();
  std::array<Field, 4> J;
  for (auto& f : J) f.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const Eigen::Vector4cd v(psi(0, j), psi(1, j), psi(2, j), psi(3, j));
    J[0][j] = v.squaredNorm();
    for (int i = 0; i < 3; ++i) J[i + 1][j] = v.dot(gammas.alpha[i] * v).real();
  }
  return J;
}

HydroFrame extract(const SpinorField& input) {
  if (input.n_components() != 4) fail(ErrorKind::invalid_argument, "extract needs a 4-component field");
  const SpinorField psi = to_representation(input, Representation::chiral_as_paper);
  const GammaSet g = build_gammas(Representation::chiral_as_paper);
  const std::size_t n = psi.n_points();

  HydroFrame f;
  f.grid = psi.grid();
  f.time = psi.time();
  for (int a = 0; a < 4; ++a) f.bar[a] = bar_partner(g, a);
  f.parts = decompose(psi);
  f.J = current(psi, g);
  f.rho = f.J[0];

  const SpinorField d1 = grad(psi);
  const SpinorField d2 = laplacian(psi);

  std::array<Field, 4> r2;
  for (int a = 0; a < 4; ++a) {
    r2[a].assign(n, 0.0);
    f.grad_S[a].assign(n, 0.0);
    f.grad_lnR[a].assign(n, 0.0);
    f.dgrad_S[a].assign(n, 0.0);
    f.dgrad_lnR[a].assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx p = psi(a, j), p1 = d1(a, j), p2 = d2(a, j);
      const double q = std::norm(p);
      r2[a][j] = q;
      if (!f.parts.valid[a][j]) continue;
      const cplx w1 = std::conj(p) * p1;
      const double re = w1.real(), im = w1.imag();
      const double curv = (std::conj(p1) * p1 + std::conj(p) * p2).real();
      const double im2 = (std::conj(p) * p2).imag();
      f.grad_lnR[a][j] = re / q;
      f.grad_S[a][j] = im / q;
      f.dgrad_lnR[a][j] = (curv * q - 2.0 * re * re) / (q * q);
      f.dgrad_S[a][j] = (im2 * q - 2.0 * im * re) / (q * q);
    }
  }

  const double rho_eps = node_threshold * node_threshold * max_of(f.rho);
  f.valid.assign(n, 0);
  f.drho.assign(n, 0.0);
  f.dJz.assign(n, 0.0);
  f.qdot.assign(n, 0.0);
  f.dqdot.assign(n, 0.0);
  f.beta_density.assign(n, 0.0);
  for (auto& q : f.qdot_vec) q.assign(n, 0.0);
  const Mat4& az = g.alpha_z();
  for (std::size_t j = 0; j < n; ++j) {
    const Eigen::Vector4cd v(psi(0, j), psi(1, j), psi(2, j), psi(3, j));
    const Eigen::Vector4cd dv(d1(0, j), d1(1, j), d1(2, j), d1(3, j));
    f.drho[j] = 2.0 * v.dot(dv).real();
    f.dJz[j] = 2.0 * v.dot(az * dv).real();
    const double rho = f.rho[j];
    if (rho_eps == 0.0 || rho < rho_eps) continue;
    f.valid[j] = 1;
    for (int i = 0; i < 3; ++i) f.qdot_vec[i][j] = f.J[i + 1][j] / rho;
    f.qdot[j] = f.qdot_vec[2][j];
    f.dqdot[j] = (f.dJz[j] * rho - f.J[3][j] * f.drho[j]) / (rho * rho);
    f.beta_density[j] = v.dot(g.beta() * v).real() / rho;
  }

  for (int a = 0; a < 4; ++a) {
    const int b = f.bar[a];
    f.logratio[a].assign(n, 0.0);
    f.grad_logratio[a].assign(n, 0.0);
    f.dgrad_logratio[a].assign(n, 0.0);
    f.logratio_valid[a].assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (!f.parts.valid[a][j] || !f.parts.valid[b][j]) continue;
      f.logratio_valid[a][j] = 1;
      f.logratio[a][j] = 0.5 * (std::log(r2[a][j]) - std::log(r2[b][j]));
      f.grad_logratio[a][j] = f.grad_lnR[a][j] - f.grad_lnR[b][j];
      f.dgrad_logratio[a][j] = f.dgrad_lnR[a][j] - f.dgrad_lnR[b][j];
    }
  }

  for (int k = 0; k < 2; ++k) {
    const int a = k, b = f.bar[k];
    f.p[k].assign(n, 0.0);
    f.dp[k].assign(n, 0.0);
    f.pair_valid[k].assign(n, 0);
    f.pair_rho[k].assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      f.pair_rho[k][j] = r2[a][j] + r2[b][j];
      if (!f.parts.valid[a][j] || !f.parts.valid[b][j]) continue;
      f.pair_valid[k][j] = 1;
      f.p[k][j] = 0.5 * (f.grad_S[a][j] + f.grad_S[b][j]);
      f.dp[k][j] = 0.5 * (f.dgrad_S[a][j] + f.dgrad_S[b][j]);
    }
  }
  return f;
}

Field velocity(const HydroFrame& frame) { return frame.qdot; }

std::array<Field, 2> momentum(const HydroFrame& frame) { return frame.p; }

QuantumPotential quantum_potential(const HydroFrame& prev, const HydroFrame& cur, const HydroFrame& next) {
  const double h = time_step(prev, cur, next);
  const std::size_t n = cur.grid.n_points;
  QuantumPotential q;
  q.contraction.assign(n, 0.0);
  q.valid.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    bool ok = cur.valid[j];
    for (int a = 0; a < 4 && ok; ++a)
      ok = prev.logratio_valid[a][j] && cur.logratio_valid[a][j] && next.logratio_valid[a][j];
    q.valid[j] = ok;
  }
  for (int a = 0; a < 4; ++a) {
    q.B[a].assign(n, 0.0);
    q.V[a].assign(n, 0.0);
    q.grad_V[a].assign(n, 0.0);
    q.component_valid[a].assign(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      const bool ok = cur.valid[j] && prev.logratio_valid[a][j] && cur.logratio_valid[a][j] &&
                      next.logratio_valid[a][j];
      if (!ok) continue;
      q.component_valid[a][j] = 1;
      const double dtL = (next.logratio[a][j] - prev.logratio[a][j]) / (2.0 * h);
      const double dtgL = (next.grad_logratio[a][j] - prev.grad_logratio[a][j]) / (2.0 * h);
      const double b = cur.qdot[j] * cur.grad_logratio[a][j] + dtL;
      const double db = cur.dqdot[j] * cur.grad_logratio[a][j] + cur.qdot[j] * cur.dgrad_logratio[a][j] + dtgL;
      q.B[a][j] = b;
      q.V[a][j] = -0.5 * b;
      q.grad_V[a][j] = -0.5 * db;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!q.valid[j]) continue;
    double s = 0.0;
    for (int a = 0; a < 4; ++a) {
      s += q.B[a][j];
      q.max_abs_B = std::max(q.max_abs_B, std::abs(q.B[a][j]));
    }
    q.contraction[j] = s;
    q.max_abs_contraction = std::max(q.max_abs_contraction, std::abs(s));
  }
  return q;
}

Field hamiltonian_density(const HydroFrame& frame, const EMFieldSet& em, int pair) {
  require_same_space(frame.grid, em.grid, "hamiltonian_density");
  if (pair < -1 || pair > 1) fail(ErrorKind::invalid_argument, "pair must be -1, 0 or 1");
  const std::size_t n = frame.grid.n_points;
  const Field a = em.A_at(frame.time);
  Field h(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (!frame.valid[j]) continue;
    double p = 0.0;
    if (pair >= 0) {
      if (!frame.pair_valid[pair][j]) continue;
      p = frame.p[pair][j];
    } else {
      double w = 0.0;
      for (int k = 0; k < 2; ++k) {
        if (!frame.pair_valid[k][j]) continue;
        p += frame.pair_rho[k][j] * frame.p[k][j];
        w += frame.pair_rho[k][j];
      }
      if (w == 0.0) continue;
      p /= w;
    }
    h[j] = frame.qdot[j] * (p - em.charge * a[j]) + frame.beta_density[j] * em.mass + em.charge * em.W[j];
  }
  return h;
}

ContinuityResidual continuity_residual(const HydroFrame& prev, const HydroFrame& cur, const HydroFrame& next) {
  const double h = time_step(prev, cur, next);
  const std::size_t n = cur.grid.n_points;
  ContinuityResidual r;
  r.residual.assign(n, 0.0);
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = (next.rho[j] - prev.rho[j]) / (2.0 * h) + cur.dJz[j];
    r.residual[j] = v;
    s += v * v;
    r.max_abs = std::max(r.max_abs, std::abs(v));
  }
  r.l2 = std::sqrt(s * cur.grid.dx);
  return r;
}

ForceBalance force_balance(const HydroFrame& prev, const HydroFrame& cur, const HydroFrame& next,
                           const EMFieldSet& em, int pair, double core_fraction) {
  if (pair != 0 && pair != 1) fail(ErrorKind::invalid_argument, "pair must be 0 or 1");
  require_same_space(cur.grid, em.grid, "force_balance");
  const double h = time_step(prev, cur, next);
  const QuantumPotential q = quantum_potential(prev, cur, next);
  const std::size_t n = cur.grid.n_points;
  const double e = em.charge;
  const Field a_prev = em.A_at(prev.time), a_cur = em.A_at(cur.time), a_next = em.A_at(next.time);

  ForceBalance fb;
  fb.lhs.assign(n, 0.0);
  fb.rhs.assign(n, 0.0);
  fb.residual.assign(n, 0.0);
  fb.grad_V.assign(n, 0.0);
  const double rho_cut = core_fraction * max_of(cur.pair_rho[pair]);
  double w = 0.0, sl = 0.0, sr = 0.0, sf = 0.0, s2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const int a = pair;
    const bool ok = cur.valid[j] && prev.pair_valid[pair][j] && cur.pair_valid[pair][j] &&
                    next.pair_valid[pair][j] && prev.logratio_valid[a][j] && cur.logratio_valid[a][j] &&
                    next.logratio_valid[a][j];
    if (!ok) continue;
    const double pi_prev = prev.p[pair][j] - e * a_prev[j];
    const double pi_next = next.p[pair][j] - e * a_next[j];
    const double pi_cur = cur.p[pair][j] - e * a_cur[j];
    const double dpi = cur.dp[pair][j] - e * em.grad_A[j];
    const double force = -e * (em.grad_W[j] + em.dA_dt[j]);
    const double lhs = (pi_next - pi_prev) / (2.0 * h) + cur.qdot[j] * dpi;
    const double rhs = force - cur.dqdot[j] * pi_cur - q.grad_V[a][j];
    fb.lhs[j] = lhs;
    fb.rhs[j] = rhs;
    fb.residual[j] = lhs - rhs;
    fb.grad_V[j] = q.grad_V[a][j];
    const double rw = cur.pair_rho[pair][j];
    w += rw;
    sl += rw * lhs;
    sr += rw * rhs;
    sf += rw * force;
    if (rw >= rho_cut) {
      ++fb.core_points;
      s2 += rw * (lhs - rhs) * (lhs - rhs);
      fb.max_abs = std::max(fb.max_abs, std::abs(lhs - rhs));
    }
  }
  if (w == 0.0) fail(ErrorKind::precondition, "force_balance: pair has no resolved points");
  fb.mean_lhs = sl / w;
  fb.mean_rhs = sr / w;
  fb.mean_force = sf / w;
  fb.weighted_l2 = std::sqrt(s2 / w);
  return fb;
}

std::vector<std::string> hydro_field_names() {
  std::vector<std::string> names{"rho", "qdot", "beta", "p0", "p1"};
  for (int a = 0; a < 4; ++a) {
    names.push_back("J" + std::to_string(a));
    names.push_back("R" + std::to_string(a));
    names.push_back("S" + std::to_string(a));
    names.push_back("logratio" + std::to_string(a));
  }
  return names;
}

Field hydro_field(const HydroFrame& f, const std::string& name) {
  if (name == "rho") return f.rho;
  if (name == "qdot") return f.qdot;
  if (name == "beta") return f.beta_density;
  if (name == "p0") return f.p[0];
  if (name == "p1") return f.p[1];
  auto indexed = [&](const std::string& prefix) -> int {
    if (name.size() != prefix.size() + 1 || name.compare(0, prefix.size(), prefix) != 0) return -1;
    const char c = name.back();
    return (c >= '0' && c <= '3') ? c - '0' : -1;
  };
  if (int a = indexed("J"); a >= 0) return f.J[a];
  if (int a = indexed("R"); a >= 0) return f.parts.R[a];
  if (int a = indexed("S"); a >= 0) return f.parts.S[a];
  if (int a = indexed("logratio"); a >= 0) return f.logratio[a];
  fail(ErrorKind::invalid_argument, "unknown hydro field '" + name + "'");
}

}  // namespace qhd
