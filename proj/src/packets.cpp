#include "qhd/packets.hpp"

#include <cmath>

#include "qhd/error.hpp"
#include "qhd/spectral.hpp"

namespace qhd {

std::vector<cplx> gaussian_envelope(const GridSpec& grid, double z0, double sigma, double k0) {
  if (!(sigma > 0.0)) fail(ErrorKind::invalid_argument, "packet width must be > 0");
  std::vector<cplx> f(grid.n_points);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double z = grid.z(j);
    const double u = (z - z0) / sigma;
    f[j] = std::exp(cplx(-0.25 * u * u, k0 * z));
  }
  return f;
}

std::array<cplx, 4> free_spinor(double k, double mass, int branch, int pair, Representation rep) {
  if (branch != 1 && branch != -1) fail(ErrorKind::invalid_argument, "branch must be +1 or -1");
  if (pair != 0 && pair != 1) fail(ErrorKind::invalid_argument, "pair must be 0 or 1");
  // In the chiral basis pair (0, 2) sees M = [[k, m], [m, -k]] and pair (1, 3)
  // sees [[-k, m], [m, k]].
  const double kk = pair == 0 ? k : -k;
  const double en = std::sqrt(k * k + mass * mass);
  double x, y;
  if (branch > 0) {
    x = en + kk;
    y = mass;
    if (x == 0.0 && y == 0.0) y = 1.0;  // massless, moving against this pair's direction
  } else {
    x = -mass;
    y = en + kk;
    if (x == 0.0 && y == 0.0) x = 1.0;
  }
  const double nrm = std::hypot(x, y);
  std::array<cplx, 4> s{};
  s[pair] = x / nrm;
  s[pair + 2] = y / nrm;
  if (rep == Representation::dirac) {
    const Mat4 u = chiral_to_dirac();
    Eigen::Vector4cd v(s[0], s[1], s[2], s[3]);
    v = u * v;
    for (int c = 0; c < 4; ++c) s[c] = v(c);
  }
  return s;
}

double normalize(SpinorField& psi) {
  const double n = norm2(psi);
  if (!(n > 0.0)) fail(ErrorKind::invalid_argument, "cannot normalize a zero field");
  const double f = 1.0 / std::sqrt(n);
  scale(psi, f);
  return f;
}

SpinorField branch_packet(const GridSpec& grid, double z0, double sigma, double k0, double mass,
                          int branch, int pair, Representation rep) {
  const Spectral sp(grid);
  const auto env = gaussian_envelope(grid, z0, sigma, k0);
  std::vector<cplx> fk(grid.n_points);
  sp.forward(env, fk);
  const auto& ks = sp.wavenumbers();
  SpinorField psi(grid, 4, grid.t0, rep);
  std::array<std::vector<cplx>, 4> spec;
  for (auto& s : spec) s.assign(grid.n_points, 0.0);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const auto u = free_spinor(ks[i], mass, branch, pair, rep);
    for (int c = 0; c < 4; ++c) spec[c][i] = fk[i] * u[c];
  }
  for (int c = 0; c < 4; ++c) sp.backward(spec[c], psi.component(c));
  normalize(psi);
  return psi;
}

SpinorField constant_spinor_packet(const GridSpec& grid, const std::vector<cplx>& envelope,
                                   const std::array<cplx, 4>& spinor, Representation rep) {
  if (envelope.size() != grid.n_points) fail(ErrorKind::grid_mismatch, "envelope size mismatch");
  SpinorField psi(grid, 4, grid.t0, rep);
  for (int c = 0; c < 4; ++c)
    for (std::size_t j = 0; j < grid.n_points; ++j) psi(c, j) = envelope[j] * spinor[c];
  normalize(psi);
  return psi;
}

double branch_weight(const SpinorField& psi, double mass, int branch, double eA) {
  if (psi.n_components() != 4) fail(ErrorKind::invalid_argument, "branch_weight needs 4 components");
  const Spectral sp(psi.grid());
  const std::size_t n = psi.n_points();
  std::array<std::vector<cplx>, 4> spec;
  for (int c = 0; c < 4; ++c) {
    spec[c].resize(n);
    sp.forward(psi.component(c), spec[c]);
  }
  const auto& ks = sp.wavenumbers();
  double on = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int pair = 0; pair < 2; ++pair) {
      const auto u = free_spinor(ks[i] - eA, mass, branch, pair, psi.representation());
      cplx amp = 0.0;
      for (int c = 0; c < 4; ++c) amp += std::conj(u[c]) * spec[c][i];
      on += std::norm(amp);
    }
    for (int c = 0; c < 4; ++c) total += std::norm(spec[c][i]);
  }
  return total > 0.0 ? on / total : 0.0;
}

}  // namespace qhd
