#pragma once

#include <array>
#include <vector>

#include "qhd/grid.hpp"

namespace qhd {

/// Electromagnetic potentials on the 1D grid plus particle constants.
///
/// W and A_z are tabulated together with their spatial gradients: the common
/// test potentials (uniform field, harmonic trap) are not periodic, so their
/// gradients cannot be taken spectrally. A may vary linearly in time,
/// A(t) = A + t dA/dt; W is static.
struct EMFieldSet {
  GridSpec grid;
  std::vector<double> W;
  std::vector<double> grad_W;
  std::vector<double> A;
  std::vector<double> grad_A;
  std::vector<double> dA_dt;
  std::array<double, 3> B_ext{0.0, 0.0, 0.0};
  double charge = 1.0;
  double mass = 1.0;

  /// W = A = 0.
  static EMFieldSet free(const GridSpec& grid, double mass = 1.0, double charge = 1.0);
  /// Static uniform electric field E along z: W = -E z.
  static EMFieldSet uniform_e(const GridSpec& grid, double e_field, double mass = 1.0, double charge = 1.0);
  /// Harmonic trap with e W = m omega^2 z^2 / 2.
  static EMFieldSet harmonic(const GridSpec& grid, double omega, double mass = 1.0, double charge = 1.0);
  /// Tabulated periodic W and A; gradients are taken spectrally.
  static EMFieldSet tabulated(const GridSpec& grid, std::vector<double> W, std::vector<double> A,
                              double mass = 1.0, double charge = 1.0);

  bool is_static() const;
  bool has_vector_potential() const;
  /// A_z at time t.
  std::vector<double> A_at(double t) const;
  /// E = -grad W - dA/dt.
  std::vector<double> E() const;
  /// B = curl A (zero in 1D) + B_ext.
  std::array<double, 3> B() const { return B_ext; }
};

void validate(const EMFieldSet& em);

}  // namespace qhd
