#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qhd/error.hpp"
#include "qhd/spinor_field.hpp"

namespace qhd {

enum class Regime { dirac, pauli, stochastic, nonlinear, boost_check, compare };

const char* to_string(Regime r);

struct GridConfig {
  std::size_t n = 1024;
  double dx = 0.25;
  double dt = 0.0;  // 0: 0.1 dx
  double t0 = 0.0;
};

/// Gaussian packet. branch: +1, -1, or 0 for the equal-weight superposition of both.
struct PacketConfig {
  double center = 0.0;
  double width = 4.0;
  double momentum = 0.0;
  int branch = 1;
  int pair = 0;
  Representation representation = Representation::chiral_as_paper;
  double theta = 0.0;  // Pauli spin angles
  double phi = 0.0;
};

struct FieldConfig {
  std::string type = "free";  // free, uniform_e, harmonic, tabulated
  double E = 0.0;
  double omega = 0.0;
  std::array<double, 3> B{0.0, 0.0, 0.0};
  double mass = 1.0;
  double charge = 1.0;
  double mu = std::numeric_limits<double>::quiet_NaN();  // NaN: e / 2m
  std::string table;  // tabulated: one "W A" pair per line, n lines
};

struct EvolveSection {
  std::size_t steps = 100;
  std::size_t record_every = 1;
  bool adjoint_check = false;
};

struct NoiseConfig {
  double T = 0.0;
  double lambda_c = 0.0;  // 0: derived from T
  double kappa = 1.0;
  double rho_floor = 1e-3;
};

struct EnsembleSection {
  std::size_t realizations = 2;
};

struct BoostConfig {
  double beta = 0.2;
  std::string trajectory;  // stored QHD1 trajectory (chiral basis)
  std::size_t points = 0;  // primed grid size; 0: half the stored grid
  double t_prime = std::numeric_limits<double>::quiet_NaN();  // NaN: centre of the record
};

struct CompareConfig {
  double velocity = 0.01;
  double duration = 100.0;
  std::size_t steps = 1000;
};

struct OutputConfig {
  std::string dir = "qhd_out";
  bool frames = true;  // write trajectory.qhd1
};

struct RunConfig {
  Regime regime = Regime::dirac;
  std::optional<std::uint64_t> seed;
  GridConfig grid;
  PacketConfig packet;
  FieldConfig field;
  EvolveSection evolve;
  NoiseConfig noise;
  EnsembleSection ensemble;
  BoostConfig boost;
  CompareConfig compare;
  OutputConfig output;
};

/// Holds every violation found, each prefixed with its key path.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// YAML mapping with the sections above. Unknown keys and bad values are all collected
/// before ConfigError is thrown.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Fully resolved config (defaults filled, dt resolved) as YAML that parse_config accepts.
std::string to_yaml(const RunConfig& config);

}  // namespace qhd
