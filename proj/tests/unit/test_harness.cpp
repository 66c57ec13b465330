#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qhd/harness.hpp"

using namespace qhd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qhd_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> violations(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& key) {
  for (const auto& s : v)
    if (s.rfind(key + ":", 0) == 0) return true;
  return false;
}

const char* small_dirac = R"(
regime: dirac
grid: {n: 256, dx: 0.25}
packet: {width: 3.0, momentum: 0.4}
evolve: {steps: 500, record_every: 50}
)";

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const RunConfig c = parse_config("regime: dirac\n");
  CHECK(c.regime == Regime::dirac);
  CHECK(c.grid.n == 1024);
  CHECK(c.grid.dt == doctest::Approx(0.1 * c.grid.dx));
  CHECK(c.field.type == "free");
  CHECK(c.packet.branch == 1);
  CHECK_FALSE(c.seed.has_value());
  const RunConfig empty = parse_config("");
  CHECK(empty.regime == Regime::dirac);
}

TEST_CASE("violations carry key paths and are all reported") {
  CHECK(mentions(violations("grid: {dx: -1}\n"), "grid.dx"));
  const auto v = violations("grid: {dx: -1, n: 100, wat: 3}\nfield: {type: plasma}\nbogus: 1\nevolve: {steps: x}\n");
  CHECK(mentions(v, "grid.dx"));
  CHECK(mentions(v, "grid.n"));
  CHECK(mentions(v, "grid.wat"));
  CHECK(mentions(v, "field.type"));
  CHECK(mentions(v, "bogus"));
  CHECK(mentions(v, "evolve.steps"));
  CHECK(v.size() == 6);
}

TEST_CASE("stochastic regime requires a seed") {
  CHECK(mentions(violations("regime: stochastic\n"), "seed"));
  CHECK(violations("regime: stochastic\nseed: 4\n").empty());
  CHECK(mentions(violations("regime: warp\n"), "regime"));
  CHECK(mentions(violations("grid: [1, 2]\n"), "grid"));
  CHECK(mentions(violations("field: {type: harmonic}\n"), "field.omega"));
  CHECK(mentions(violations("boost: {beta: 1.5}\n"), "boost.beta"));
  CHECK(!violations("grid: {n: 64\n").empty());
}

TEST_CASE("resolved config round-trips through yaml") {
  const RunConfig c = parse_config(
      "regime: stochastic\nseed: 9\ngrid: {n: 64, dx: 0.3}\nnoise: {T: 0.5}\nfield: {B: [0, 0, 0.2], mu: 0.7}\n");
  const std::string y = to_yaml(c);
  const RunConfig d = parse_config(y);
  CHECK(to_yaml(d) == y);
  CHECK(d.grid.dt == c.grid.dt);
  CHECK(*d.seed == 9);
  CHECK(d.field.B[2] == 0.2);
  CHECK(d.field.mu == 0.7);
}

TEST_CASE("free Gaussian Dirac run passes its invariants") {
  const fs::path dir = scratch("dirac");
  const RunResult r = run(parse_config(small_dirac), dir.string());
  CHECK(r.status == RunStatus::ok);
  REQUIRE(r.report.find("norm_drift"));
  CHECK(std::stod(*r.report.find("norm_drift")) < 1e-10);
  CHECK(std::stod(*r.report.find("continuity_order_ratio")) > 3.5);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "series.csv"));
  CHECK(fs::exists(dir / "trajectory.qhd1"));
  CHECK(slurp(dir / "report.txt").find("status = ok") != std::string::npos);

  const std::string manifest = slurp(dir / "manifest.json");
  CHECK(manifest.find("\"version\": \"0.1.0\"") != std::string::npos);
  CHECK(manifest.find("dt: 0.025") != std::string::npos);
}

TEST_CASE("identical configs give identical artifacts") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const char* cfg = R"(
regime: stochastic
seed: 11
grid: {n: 128, dx: 0.25}
packet: {width: 3.0}
noise: {T: 1.0e-6}
evolve: {steps: 40, record_every: 10}
)";
  run(parse_config(cfg), a.string());
  run(parse_config(cfg), b.string());
  for (const char* f : {"series.csv", "noise_steps.csv", "trajectory.qhd1", "report.txt", "manifest.json"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("ensemble output does not depend on QHD_THREADS") {
  const RunConfig c = parse_config(R"(
regime: stochastic
seed: 3
grid: {n: 64, dx: 0.25}
packet: {width: 2.0}
noise: {T: 1.0e-6}
evolve: {steps: 10, record_every: 5}
)");
  const fs::path a = scratch("ens_a"), b = scratch("ens_b");
  setenv("QHD_THREADS", "1", 1);
  run_ensemble(c, 6, a.string());
  setenv("QHD_THREADS", "4", 1);
  run_ensemble(c, 6, b.string());
  unsetenv("QHD_THREADS");
  CHECK(slurp(a / "ensemble.csv") == slurp(b / "ensemble.csv"));
  CHECK(slurp(a / "raw_norm.csv") == slurp(b / "raw_norm.csv"));
}

TEST_CASE("boost_check without a stored trajectory is a precondition error") {
  try {
    run(parse_config("regime: boost_check\n"), scratch("nob").string());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
    CHECK(status_for(e) == RunStatus::config_error);
    CHECK(std::string(e.what()).find("boost.trajectory") != std::string::npos);
  }
  CHECK_THROWS_AS(boost_check("/nonexistent/trajectory.qhd1", {}, scratch("nob2").string()), Error);
}

TEST_CASE("boost check of a stored run") {
  const fs::path src = scratch("boost_src");
  run(parse_config(R"(
regime: dirac
grid: {n: 512, dx: 0.25, dt: 0.0125, t0: -8}
packet: {width: 3.0, momentum: 0.3}
evolve: {steps: 1280, record_every: 4}
)"),
      src.string());
  const fs::path out = scratch("boost_out");
  BoostCheckOptions o;
  o.beta = 0.2;
  o.t_prime = 0.0;
  const RunResult r = boost_check((src / "trajectory.qhd1").string(), o, out.string());
  CHECK(r.status == RunStatus::ok);
  CHECK(std::stod(*r.report.find("j_covariance")) < 1e-4);
  CHECK(fs::exists(out / "vqu_histogram.csv"));
  CHECK(fs::exists(out / "vqu_deviation.csv"));

  std::ostringstream csv;
  extract_field((src / "trajectory.qhd1").string(), "rho", csv);
  CHECK(csv.str().rfind("t,z,rho\n", 0) == 0);
  std::ostringstream bad;
  CHECK_THROWS_AS(extract_field((src / "trajectory.qhd1").string(), "nope", bad), Error);
}

TEST_CASE("compare regime dispatches to the Dirac-Pauli comparison") {
  const fs::path dir = scratch("cmp");
  const RunResult r = run(parse_config(R"(
regime: compare
grid: {n: 512, dx: 0.5}
packet: {width: 10.0}
compare: {velocity: 0.01, duration: 50, steps: 50}
)"),
                          dir.string());
  CHECK(r.status == RunStatus::ok);
  CHECK(r.report.find("rho_distance"));
  CHECK(r.report.find("negative_energy_weight"));
}

TEST_CASE("pauli and nonlinear regimes write series") {
  const fs::path p = scratch("pauli");
  const RunResult rp = run(parse_config(R"(
regime: pauli
grid: {n: 128, dx: 0.25}
packet: {width: 3.0, theta: 1.5707963267948966}
field: {B: [0, 0, 0.5]}
evolve: {steps: 40, record_every: 10}
)"),
                           p.string());
  CHECK(rp.status == RunStatus::ok);
  CHECK(slurp(p / "series.csv").rfind("t,norm,mean_z,width,sx,sy,sz", 0) == 0);

  const fs::path n = scratch("nl");
  const RunResult rn = run(parse_config(R"(
regime: nonlinear
grid: {n: 256, dx: 0.25}
packet: {width: 3.0}
evolve: {steps: 40, record_every: 10}
)"),
                           n.string());
  CHECK(rn.status == RunStatus::ok);
  CHECK(rn.report.find("spreading_ratio"));
  CHECK(fs::exists(n / "norm_corrections.csv"));
}

TEST_CASE("missing tabulated field file is an io error") {
  RunConfig c = parse_config("field: {type: tabulated, table: /nonexistent/table.txt}\ngrid: {n: 64}\n");
  try {
    run(c, scratch("tab").string());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(status_for(e) == RunStatus::io_error);
  }
}
