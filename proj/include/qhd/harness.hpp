#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qhd/config.hpp"
#include "qhd/em_field.hpp"
#include "qhd/evolve.hpp"
#include "qhd/pauli.hpp"

namespace qhd {

inline constexpr const char* artifact_version = "0.1.0";

/// Exit status of a run: 0 ok, 1 invariant failure, 2 config or precondition error, 3 I/O error.
enum class RunStatus { ok = 0, invariant_failure = 1, config_error = 2, io_error = 3 };

RunStatus status_for(const Error& e);

/// Ordered key = value lines plus the names of failed hard invariants.
struct Report {
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::string> failures;

  void add(const std::string& key, double value);
  void add(const std::string& key, const std::string& value);
  /// Adds the value and records a failure under `key` unless ok.
  void gate(const std::string& key, double value, bool ok);
  const std::string* find(const std::string& key) const;
  std::string text() const;
};

struct RunResult {
  RunStatus status = RunStatus::ok;
  Report report;
  std::string out_dir;
};

GridSpec make_grid(const RunConfig& c);
EMFieldSet make_field(const RunConfig& c, const GridSpec& grid);
SpinorField make_dirac_packet(const RunConfig& c, const GridSpec& grid);
PauliState make_pauli_packet(const RunConfig& c, const GridSpec& grid);

/// Executes the configured regime and writes manifest.json, report.txt, series.csv and,
/// when enabled, trajectory.qhd1 (frames in the chiral basis) into out_dir
/// (config.output.dir when empty). Errors propagate as qhd::Error.
RunResult run(const RunConfig& config, const std::string& out_dir = "");

/// n stochastic realizations of the config (seed required); writes ensemble.csv.
RunResult run_ensemble(const RunConfig& config, std::size_t n_realizations, const std::string& out_dir = "");

struct BoostCheckOptions {
  double beta = 0.2;
  std::size_t points = 0;
  double t_prime = std::numeric_limits<double>::quiet_NaN();
};

/// Covariance and V reports for a stored free-field trajectory.
RunResult boost_check(const std::string& trajectory_path, const BoostCheckOptions& options,
                      const std::string& out_dir);

/// Frames of a stored trajectory (chiral basis, equally spaced in time).
Trajectory load_trajectory(const std::string& path);

/// Writes "t,z,value" rows of a hydrodynamic field for every frame.
void extract_field(const std::string& trajectory_path, const std::string& name, std::ostream& csv);

}  // namespace qhd
