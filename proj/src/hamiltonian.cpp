#include "qhd/hamiltonian.hpp"

#include <cmath>

#include "qhd/error.hpp"
#include "qhd/spectral.hpp"

namespace qhd {

SpinorField apply_dirac_hamiltonian(const SpinorField& psi, const EMFieldSet& em, const GammaSet& gammas) {
  if (psi.n_components() != 4) fail(ErrorKind::invalid_argument, "Dirac Hamiltonian needs 4 components");
  require_same_space(psi.grid(), em.grid, "apply_dirac_hamiltonian");
  if (psi.representation() != gammas.representation)
    fail(ErrorKind::invalid_argument, "field and gamma set use different representations");

  const SpinorField d = grad(psi);
  const std::vector<double> a = em.A_at(psi.time());
  const Mat4& alpha = gammas.alpha_z();
  const Mat4& beta = gammas.beta();
  const cplx mi(0.0, -1.0);
  const double e = em.charge;

  SpinorField out(psi.grid(), 4, psi.time(), psi.representation());
  for (std::size_t j = 0; j < psi.n_points(); ++j) {
    Eigen::Vector4cd v, dv;
    for (int c = 0; c < 4; ++c) {
      v(c) = psi(c, j);
      dv(c) = d(c, j);
    }
    const Eigen::Vector4cd h =
        alpha * (mi * dv - e * a[j] * v) + em.mass * (beta * v) + e * em.W[j] * v;
    for (int c = 0; c < 4; ++c) out(c, j) = h(c);
  }
  return out;
}

double energy_expectation(const SpinorField& psi, const EMFieldSet& em, const GammaSet& gammas) {
  return inner(psi, apply_dirac_hamiltonian(psi, em, gammas)).real();
}

double dispersion(double k, double mass) { return std::sqrt(k * k + mass * mass); }

}  // namespace qhd
