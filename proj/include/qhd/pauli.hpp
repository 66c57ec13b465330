#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "qhd/em_field.hpp"
#include "qhd/hydro.hpp"
#include "qhd/spinor_field.hpp"

namespace qhd {

/// Two-component nonrelativistic state with the rest-mass phase removed.
struct PauliState {
  SpinorField xi;  // 2 components
  std::array<double, 3> B_ext{0.0, 0.0, 0.0};
  /// Coefficient of the mu B.sigma energy; NaN selects e / 2m from the field set.
  double mu = std::numeric_limits<double>::quiet_NaN();

  const GridSpec& grid() const { return xi.grid(); }
  double time() const { return xi.time(); }
};

PauliState make_pauli_state(const SpinorField& xi, const std::array<double, 3>& B_ext = {0.0, 0.0, 0.0},
                            double mu = std::numeric_limits<double>::quiet_NaN());
double effective_mu(const PauliState& s, const EMFieldSet& em);

/// xi = |Phi| exp(iS) (cos(theta/2) exp(-i phi/2), sin(theta/2) exp(i phi/2)).
/// S and phi are built from separately unwrapped component phases, so the
/// reconstruction is exact; phi is masked where either component vanishes.
struct SpinAngles {
  Field amplitude;
  Field action;
  Field theta;
  Field phi;
  std::vector<std::uint8_t> valid;      // amplitude resolved
  std::vector<std::uint8_t> phi_valid;  // both components resolved
};
SpinAngles spin_angles(const PauliState& s);
/// Rebuilds xi from the angles; entries outside `valid` are zero.
SpinorField reconstruct(const SpinAngles& angles, const PauliState& like);

/// n = xi^dagger sigma xi / xi^dagger xi at every point (zero on masked points).
std::array<Field, 3> spin_direction(const PauliState& s);
/// Density-weighted mean of spin_direction.
std::array<double, 3> mean_spin(const PauliState& s);

/// One Strang step of H = (p - eA)^2 / 2m + e W + mu B.sigma. The kinetic factor is
/// exact in k space (A must be uniform), the spin rotation exp(-i mu B.sigma dt) exact.
PauliState pauli_step(const PauliState& s, const EMFieldSet& em, double dt, std::size_t step_index = 0);
std::vector<PauliState> pauli_evolve(const PauliState& s0, const EMFieldSet& em, double dt, std::size_t n_steps,
                                     std::size_t record_every);

/// v = (grad S - eA)/m + spin term. With the angle convention above the spin term is
/// -(1/2m) cos(theta) grad phi; rho v equals the probability current exactly.
struct ContinuityVelocity {
  Field orbital;
  Field spin;
  Field total;
  std::vector<std::uint8_t> valid;
};
ContinuityVelocity continuity_velocity(const PauliState& s, const EMFieldSet& em);

/// V_q = -(1/2m) (d^2 sqrt(rho)) / sqrt(rho), masked (0) where rho < rel_floor * max rho.
struct MadelungPotential {
  Field V;
  Field grad_V;
  std::vector<std::uint8_t> valid;
};
MadelungPotential madelung_potential(const Field& rho, const GridSpec& grid, double mass, double rel_floor = 1e-10);

/// Residual of the spinless Euler equation at the middle frame,
///   d_t v + v d_z v = -(e/m)(d_z W + d_t A) - (1/m) d_z V_q,
/// plus its Ehrenfest form d<v>/dt = -(e/m) <d_z W + d_t A>.
struct ClassicalForceReport {
  Field residual;
  double weighted_l2 = 0.0;
  double max_abs = 0.0;
  double mean_accel = 0.0;     // d<v>/dt from the three frames
  double expected_accel = 0.0;  // -(e/m) <d_z W + d_t A>
  std::size_t core_points = 0;
};
ClassicalForceReport classical_force_check(const std::vector<PauliState>& frames, const EMFieldSet& em,
                                           double core_fraction = 1e-6);

/// Velocity-matched initial states: the Pauli packet carries k = m v, the Dirac packet
/// is the positive-energy branch with k = gamma m v and the same envelope and spin.
struct MatchedStates {
  SpinorField dirac;
  PauliState pauli;
};
MatchedStates matched_states(const GridSpec& grid, double z0, double sigma, double v, double mass,
                             const std::array<cplx, 2>& spin);

struct DiracPauliComparison {
  double rho_distance = 0.0;       // ||rho_D - rho_P|| / ||rho_P||
  double velocity_distance = 0.0;  // rho_P-weighted rms of qdot - v
  double negative_energy_weight = 0.0;
  double t_final = 0.0;
};
/// Evolves both states to T_final in n_steps and compares densities and velocity fields.
DiracPauliComparison dirac_vs_pauli(const SpinorField& psi0, const PauliState& pauli0, const EMFieldSet& em,
                                    double T_final, std::size_t n_steps);

}  // namespace qhd
