#pragma once

#include <array>
#include <string>
#include <vector>

#include "qhd/evolve.hpp"
#include "qhd/gamma.hpp"

namespace qhd {

/// Boost along z to the frame moving with velocity beta:
/// t' = gamma (t - beta z), z' = gamma (z - beta t), psi'(x') = S psi(x) with
/// S = exp(-(eta/2) chi^0 chi^3), eta = atanh(beta).
struct BoostSpec {
  double beta = 0.0;
  double gamma = 1.0;
  double rapidity = 0.0;
  Mat4 spinor_boost = Mat4::Identity();
  /// Lambda^mu_nu acting on (t, x, y, z).
  Eigen::Matrix4d lambda = Eigen::Matrix4d::Identity();
  Representation representation = Representation::chiral_as_paper;
};

BoostSpec make_boost(double beta, Representation rep = Representation::chiral_as_paper);

/// (t, z) of the primed event (t', z').
std::array<double, 2> unprimed_event(const BoostSpec& b, double t_prime, double z_prime);
/// (t', z') of the event (t, z).
std::array<double, 2> primed_event(const BoostSpec& b, double t, double z);

/// Primed-frame sampling: slices at the given t' on a grid centred on z' = 0.
struct PrimedSlices {
  GridSpec grid;
  std::vector<double> times;
};

/// Region of unprimed spacetime needed by a set of primed slices.
struct Coverage {
  double t_min = 0.0, t_max = 0.0, z_min = 0.0, z_max = 0.0;
  double recorded_t_min = 0.0, recorded_t_max = 0.0, recorded_z_min = 0.0, recorded_z_max = 0.0;
  bool ok = false;
  std::string describe() const;
};
Coverage coverage(const Trajectory& traj, const BoostSpec& boost, const PrimedSlices& slices);

struct BoostedTrajectory {
  BoostSpec boost;
  GridSpec grid;
  std::vector<SpinorField> slices;  // time() = t'
};

/// Interpolates psi at each primed event (spectral in z, cubic in t) and applies S.
/// Events that coincide with stored samples are copied. Throws a domain error naming
/// the missing region when the trajectory does not cover the slices.
BoostedTrajectory boost_field(const Trajectory& traj, const BoostSpec& boost, const PrimedSlices& slices,
                              unsigned threads = 0);

struct CovarianceReport {
  /// max over events of |J'^mu(spinor route) - Lambda J(interpolated)| / max |J'^0|, per mu.
  std::array<double, 4> deviation{};
  double max_deviation = 0.0;
  double charge = 0.0;  // integral of rho at the first recorded frame
  std::vector<double> primed_charge;
  double max_charge_error = 0.0;  // relative
};
CovarianceReport current_covariance_check(const Trajectory& traj, const BoostSpec& boost,
                                          const PrimedSlices& slices, unsigned threads = 0);

/// Comparison of the per-component bracket field V_a between frames at matched events.
/// V_a is evaluated in the primed frame from boosted slices (t' - h, t', t' + h) and in
/// the original frame on stored frames, then carried to the events by local bicubic
/// interpolation. rho V_a = -(1/2) J^mu d_mu L_a is reported alongside. Statistics use
/// points with rho' >= core_fraction * max rho' where both frames resolve the component.
struct VquStats {
  double max_abs = 0.0;
  double rms = 0.0;
  double scale = 0.0;  // max |field| in the primed frame
  double relative() const { return scale > 0.0 ? max_abs / scale : 0.0; }
};
struct VquReport {
  double beta = 0.0;
  double t_prime = 0.0;
  std::array<VquStats, 4> V;
  std::array<VquStats, 4> rho_V;
  VquStats contraction;  // sum_a V_a
  std::size_t compared_points = 0;
  double mask_overlap = 0.0;  // compared / valid in the primed frame
  bool low_overlap = false;   // mask_overlap < 0.5
  std::vector<double> z_prime;
  std::array<std::vector<double>, 4> deviation;  // V'_a - V_a per point, 0 where not compared
};
VquReport vqu_invariance_check(const Trajectory& traj, const BoostSpec& boost, const GridSpec& primed_grid,
                               double t_prime, double h_prime, double core_fraction = 1e-6,
                               unsigned threads = 0);

}  // namespace qhd
