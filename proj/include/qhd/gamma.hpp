#pragma once

#include <Eigen/Dense>
#include <array>

#include "qhd/spinor_field.hpp"

namespace qhd {

using Mat4 = Eigen::Matrix4cd;
using Mat2 = Eigen::Matrix2cd;

/// The four gamma matrices chi^0..chi^3 with signature (+,-,-,-) and the
/// products alpha_i = chi^0 chi^i.
///
/// chiral_as_paper: chi^mu = [[0, tau^mu], [sigma^mu, 0]] with sigma^0 = tau^0 = I and
/// sigma^k = -tau^k = Pauli_k. In this basis alpha_3 = diag(1, -1, -1, 1), so in
/// one dimension the pairs (0,2) and (1,3) decouple.
/// dirac: chi^0 = diag(I, -I), reached from chiral_as_paper by chiral_to_dirac().
struct GammaSet {
  std::array<Mat4, 4> chi;
  std::array<Mat4, 3> alpha;  // alpha[i-1] = chi^0 chi^i
  Representation representation = Representation::chiral_as_paper;

  const Mat4& beta() const { return chi[0]; }
  const Mat4& alpha_z() const { return alpha[2]; }
};

GammaSet build_gammas(Representation rep);

/// Pauli matrices sigma_1..sigma_3 (index 0 is the identity).
const std::array<Mat2, 4>& pauli_matrices();

/// Unitary U with psi_dirac = U psi_chiral and chi_dirac = U chi_chiral U^dagger.
Mat4 chiral_to_dirac();

/// Re-expresses a 4-component field in the requested basis.
SpinorField to_representation(const SpinorField& psi, Representation rep);

/// Index of the component that chi^0 maps a onto (the "bar" partner), or -1
/// when chi^0 is not a permutation in this representation.
int bar_partner(const GammaSet& g, int a);

/// Minkowski metric diag(1,-1,-1,-1).
double metric(int mu, int nu);

/// Applies a constant 4x4 matrix at every grid point.
SpinorField apply_pointwise(const Mat4& m, const SpinorField& psi);

}  // namespace qhd
