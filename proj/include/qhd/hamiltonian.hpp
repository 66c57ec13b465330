#pragma once

#include "qhd/em_field.hpp"
#include "qhd/gamma.hpp"
#include "qhd/spinor_field.hpp"

namespace qhd {

/// H_D psi = alpha_z (-i d/dz - e A(t)) psi + beta m psi + e W psi, with A taken at
/// psi.time(). The derivative is spectral.
SpinorField apply_dirac_hamiltonian(const SpinorField& psi, const EMFieldSet& em, const GammaSet& gammas);

/// Real part of <psi, H_D psi>.
double energy_expectation(const SpinorField& psi, const EMFieldSet& em, const GammaSet& gammas);

/// E(k) = sqrt(k^2 + m^2).
double dispersion(double k, double mass);

}  // namespace qhd
