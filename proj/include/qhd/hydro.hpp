#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qhd/em_field.hpp"
#include "qhd/gamma.hpp"
#include "qhd/spinor_field.hpp"

namespace qhd {

using Field = std::vector<double>;

/// Relative node threshold: R_a < node_threshold * max R_a is masked.
inline constexpr double node_threshold = 1e-8;

/// Moduli and unwrapped phases of every component.
struct Decomposition {
  std::vector<Field> R;
  std::vector<Field> S;
  /// 1 where the component is resolved, 0 at nodes.
  std::vector<std::vector<std::uint8_t>> valid;
  /// Grid indices where the unwrapped phase restarts: the periodic closure when the
  /// component winds, and the first point after each masked gap.
  std::vector<std::vector<std::size_t>> seams;
  /// Net winding number of each component around the periodic box.
  std::vector<long> winding;
  std::vector<bool> all_masked;
};

Decomposition decompose(const SpinorField& psi);

/// J^0 = psi^dagger psi and J^i = psi^dagger alpha_i psi, i = x, y, z.
std::array<Field, 4> current(const SpinorField& psi, const GammaSet& gammas);

/// One time slice of hydrodynamic fields. Spatial derivatives are evaluated by the
/// chain rule from spectral psi' and psi'' rather than by differentiating derived
/// fields, which are not periodic and undefined at nodes. Masked points hold 0.
///
/// Pair quantities (p, log-ratio) use the chi^0 partner abar of each component and
/// therefore live in the chiral basis; other inputs are converted first.
struct HydroFrame {
  GridSpec grid;
  double time = 0.0;
  std::array<int, 4> bar{2, 3, 0, 1};

  Decomposition parts;
  Field rho;
  std::array<Field, 4> J;
  Field qdot;  // J^z / rho
  std::array<Field, 3> qdot_vec;
  std::vector<std::uint8_t> valid;  // rho resolved
  Field beta_density;               // psi^dagger chi^0 psi / rho

  std::array<Field, 4> grad_S;
  std::array<Field, 4> grad_lnR;
  std::array<Field, 4> dgrad_S;    // d/dz of grad_S
  std::array<Field, 4> dgrad_lnR;  // d/dz of grad_lnR
  Field drho;
  Field dJz;
  Field dqdot;

  /// Per component ln(R_a / R_abar) and its gradient; valid where both are resolved.
  std::array<Field, 4> logratio;
  std::array<Field, 4> grad_logratio;
  std::array<Field, 4> dgrad_logratio;
  std::array<std::vector<std::uint8_t>, 4> logratio_valid;

  /// Momentum per decoupled pair: pair 0 = (0, 2), pair 1 = (1, 3).
  std::array<Field, 2> p;
  std::array<Field, 2> dp;
  std::array<std::vector<std::uint8_t>, 2> pair_valid;
  std::array<Field, 2> pair_rho;
};

HydroFrame extract(const SpinorField& psi);

Field velocity(const HydroFrame& frame);
std::array<Field, 2> momentum(const HydroFrame& frame);

/// Per-component quantum-potential bracket. B_a = qdot d_z L_a + d_t L_a with L_a the log-ratio;
/// V_a = -(1/2) B_a. The 1/i prefactor of the bracket is recorded in
/// `imaginary_prefactor_dropped` rather than applied.
struct QuantumPotential {
  std::array<Field, 4> B;
  std::array<Field, 4> V;
  std::array<Field, 4> grad_V;
  /// sum_a B_a, zero by pair antisymmetry.
  Field contraction;
  /// All four components resolved.
  std::vector<std::uint8_t> valid;
  /// Component a and its partner resolved in all three frames.
  std::array<std::vector<std::uint8_t>, 4> component_valid;
  double max_abs_B = 0.0;
  double max_abs_contraction = 0.0;
  bool imaginary_prefactor_dropped = true;
};

/// Central difference in time over three equally spaced frames.
QuantumPotential quantum_potential(const HydroFrame& prev, const HydroFrame& cur, const HydroFrame& next);

/// q . (p_pair - eA) + (psi^dagger chi^0 psi / rho) m + e W. pair = -1 averages the two pairs
/// weighted by their densities.
Field hamiltonian_density(const HydroFrame& frame, const EMFieldSet& em, int pair = -1);

/// d_t rho + d_z J^z at the middle frame.
struct ContinuityResidual {
  Field residual;
  double l2 = 0.0;   // sqrt(sum r^2 dx)
  double max_abs = 0.0;
};
ContinuityResidual continuity_residual(const HydroFrame& prev, const HydroFrame& cur, const HydroFrame& next);

/// Force balance for one pair at the middle frame:
///   LHS = d_t pi + qdot d_z pi,  pi = p - eA
///   RHS = -e (d_z W + d_t A) - (d_z qdot) pi - d_z V
/// with V the pair's quantum potential. Means are rho-weighted over the pair's valid
/// region; pointwise norms are restricted to rho >= core_fraction * max rho.
struct ForceBalance {
  Field lhs;
  Field rhs;
  Field residual;
  Field grad_V;
  double mean_lhs = 0.0;
  double mean_rhs = 0.0;
  double mean_force = 0.0;  // rho-weighted -e(d_z W + d_t A)
  double weighted_l2 = 0.0;
  double max_abs = 0.0;
  std::size_t core_points = 0;
};
ForceBalance force_balance(const HydroFrame& prev, const HydroFrame& cur, const HydroFrame& next,
                           const EMFieldSet& em, int pair, double core_fraction = 1e-6);

/// Names accepted by hydro_field: rho, qdot, J0..J3, R0..R3, S0..S3, p0, p1,
/// logratio0..logratio3, beta.
Field hydro_field(const HydroFrame& frame, const std::string& name);
std::vector<std::string> hydro_field_names();

}  // namespace qhd
