#pragma once

#include <array>

#include "qhd/gamma.hpp"
#include "qhd/spinor_field.hpp"

namespace qhd {

/// Scalar Gaussian envelope exp(-(z - z0)^2 / (4 sigma^2) + i k0 z); sigma is the
/// standard deviation of |f|^2.
std::vector<cplx> gaussian_envelope(const GridSpec& grid, double z0, double sigma, double k0);

/// Free positive- (branch = +1) or negative-energy (branch = -1) eigenspinor of
/// alpha_z k + beta m, unit norm, in the requested representation. `pair` selects
/// which decoupled chiral pair carries it: 0 for components (0, 2), 1 for (1, 3).
std::array<cplx, 4> free_spinor(double k, double mass, int branch, int pair, Representation rep);

/// Packet with the Gaussian envelope in which every Fourier mode carries the free
/// eigenspinor of the chosen branch, so it contains no admixture of the other branch.
/// Normalized to norm2 = 1.
SpinorField branch_packet(const GridSpec& grid, double z0, double sigma, double k0, double mass,
                          int branch, int pair, Representation rep);

/// Envelope times a fixed spinor, normalized.
SpinorField constant_spinor_packet(const GridSpec& grid, const std::vector<cplx>& envelope,
                                   const std::array<cplx, 4>& spinor, Representation rep);

/// Fraction of norm on the free branch with the given sign (mass m, vector potential A uniform).
double branch_weight(const SpinorField& psi, double mass, int branch, double eA = 0.0);

/// Normalizes to norm2 = 1 and returns the factor applied.
double normalize(SpinorField& psi);

}  // namespace qhd
