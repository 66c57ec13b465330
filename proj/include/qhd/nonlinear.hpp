#pragma once

#include <vector>

#include "qhd/evolve.hpp"
#include "qhd/hydro.hpp"

namespace qhd {

/// (i/2) B_a psi_a per component: the quantum-potential bracket applied to psi.
/// Evaluated in the chiral basis and returned in the representation of `cur`.
SpinorField bracket_term(const SpinorField& prev, const SpinorField& cur, const SpinorField& next);

/// The extra Hamiltonian term of the classical variant, -(i/2) B_a psi_a.
/// Zero at masked points.
SpinorField classical_term(const SpinorField& prev, const SpinorField& cur, const SpinorField& next);

struct ClassicalRun {
  Trajectory trajectory;
  /// Per step: norm after the nonlinear step divided by the norm before, minus 1.
  std::vector<double> norm_correction;
  /// Per recorded frame.
  std::vector<double> times;
  std::vector<double> width;
  std::vector<double> centroid;
  /// Largest growth of the masked point count over the initial count, as a grid fraction.
  double max_mask_growth = 0.0;
};

/// Split-step evolution with the classical term frozen over each step. The term is
/// built from the previous state, the current state and a linear predictor, applied as
/// the non-unitary factor exp(-B_a dt / 2) split around the Dirac step, then the norm is
/// restored. Throws BlowupError on NaN or when the node mask grows by more than
/// max_mask_growth of the grid.
ClassicalRun evolve_classical(const SpinorField& psi0, const EMFieldSet& em, const EvolveConfig& config,
                              double max_mask_growth = 0.1);

/// Width and centroid of a linear run sampled the same way, for paired comparison.
struct WidthSeries {
  std::vector<double> times;
  std::vector<double> width;
  std::vector<double> centroid;
};
WidthSeries width_series(const Trajectory& traj);
WidthSeries width_series(const ClassicalRun& run);

/// (w_nl(end) - w_nl(0)) / (w_lin(end) - w_lin(0)).
double spreading_ratio(const WidthSeries& nonlinear, const WidthSeries& linear);

}  // namespace qhd
