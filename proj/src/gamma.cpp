#include "qhd/gamma.hpp"

#include "qhd/error.hpp"

namespace qhd {

namespace {

Mat4 blocks(const Mat2& tl, const Mat2& tr, const Mat2& bl, const Mat2& br) {
  Mat4 m;
  m << tl, tr, bl, br;
  return m;
}

GammaSet chiral_set() {
  const auto& s = pauli_matrices();
  const Mat2 z = Mat2::Zero();
  GammaSet g;
  g.representation = Representation::chiral_as_paper;
  g.chi[0] = blocks(z, s[0], s[0], z);
  for (int k = 1; k <= 3; ++k) g.chi[k] = blocks(z, -s[k], s[k], z);
  return g;
}

void fill_alpha(GammaSet& g) {
  for (int i = 1; i <= 3; ++i) g.alpha[i - 1] = g.chi[0] * g.chi[i];
}

}  // namespace

const std::array<Mat2, 4>& pauli_matrices() {
  static const std::array<Mat2, 4> s = [] {
    std::array<Mat2, 4> m;
    const cplx i(0.0, 1.0);
    m[0] << 1.0, 0.0, 0.0, 1.0;
    m[1] << 0.0, 1.0, 1.0, 0.0;
    m[2] << 0.0, -i, i, 0.0;
    m[3] << 1.0, 0.0, 0.0, -1.0;
    return m;
  }();
  return s;
}

Mat4 chiral_to_dirac() {
  const auto& s = pauli_matrices();
  return blocks(s[0], s[0], s[0], -s[0]) / std::sqrt(2.0);
}

GammaSet build_gammas(Representation rep) {
  GammaSet g = chiral_set();
  if (rep == Representation::dirac) {
    // U chi U^dagger with U = V / sqrt(2), V = V^dagger = [[I, I], [I, -I]]:
    // conjugating by V and halving keeps every entry exact.
    const auto& s = pauli_matrices();
    const Mat4 v = blocks(s[0], s[0], s[0], -s[0]);
    for (auto& c : g.chi) c = (v * c * v) / 2.0;
    g.representation = Representation::dirac;
  }
  fill_alpha(g);
  return g;
}

SpinorField to_representation(const SpinorField& psi, Representation rep) {
  if (psi.n_components() != 4) fail(ErrorKind::invalid_argument, "to_representation needs a 4-component field");
  if (psi.representation() == rep) return psi;
  const Mat4 u = chiral_to_dirac();
  SpinorField out = apply_pointwise(rep == Representation::dirac ? u : Mat4(u.adjoint()), psi);
  out.set_representation(rep);
  return out;
}

int bar_partner(const GammaSet& g, int a) {
  int found = -1;
  for (int b = 0; b < 4; ++b) {
    const cplx v = g.chi[0](a, b);
    if (v == cplx(0.0)) continue;
    if (v != cplx(1.0) || found >= 0 || b == a) return -1;
    found = b;
  }
  return found;
}

double metric(int mu, int nu) {
  if (mu != nu) return 0.0;
  return mu == 0 ? 1.0 : -1.0;
}

SpinorField apply_pointwise(const Mat4& m, const SpinorField& psi) {
  SpinorField out = psi;
  const std::size_t n = psi.n_points();
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::Vector4cd v(psi(0, j), psi(1, j), psi(2, j), psi(3, j));
    const Eigen::Vector4cd w = m * v;
    for (int a = 0; a < 4; ++a) out(a, j) = w(a);
  }
  return out;
}

}  // namespace qhd
