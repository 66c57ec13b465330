#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "qhd/qhd.h"

namespace {

int exit_code(qhd_status s) {
  switch (s) {
    case QHD_OK: return 0;
    case QHD_INVARIANT_FAILURE: return 1;
    case QHD_CONFIG_ERROR:
    case QHD_INVALID_ARGUMENT: return 2;
    case QHD_IO_ERROR: return 3;
    default: return 1;
  }
}

int report_out(qhd_status s, qhd_report* r) {
  if (r) {
    std::fputs(qhd_report_text(r), stdout);
    qhd_report_free(r);
  } else {
    std::fprintf(stderr, "error: %s\n", qhd_last_error());
  }
  return exit_code(s);
}

int with_config(const std::string& path, qhd_config** c) {
  const qhd_status s = qhd_config_load(path.c_str(), c);
  if (s != QHD_OK) std::fprintf(stderr, "error: %s\n", qhd_last_error());
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac quantum-hydrodynamics toolkit"};
  app.set_version_flag("--version", std::string(qhd_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir, traj_path, field, csv_path, boost_dir = "boost_check";
  double beta = 0.2;
  std::size_t points = 0, realizations = 2;

  auto* run = app.add_subcommand("run", "run a configured regime");
  run->add_option("config", config_path, "YAML config")->required();
  run->add_option("--out", out_dir, "output directory (default: output.dir)");

  auto* extract = app.add_subcommand("extract", "dump a hydrodynamic field of a stored trajectory as CSV");
  extract->add_option("trajectory", traj_path, "trajectory.qhd1")->required();
  extract->add_option("--dump-field", field, "rho, qdot, J0..J3, R0..R3, S0..S3, p0, p1, logratio0..3, beta")
      ->required();
  extract->add_option("--out", csv_path, "CSV file (default: stdout)");

  auto* boost = app.add_subcommand("boost-check", "boost a stored trajectory and compare frames");
  boost->add_option("trajectory", traj_path, "trajectory.qhd1")->required();
  boost->add_option("--beta", beta, "boost velocity")->required();
  boost->add_option("--points", points, "primed grid points (default: half the stored grid)");
  boost->add_option("--out", boost_dir, "output directory")->capture_default_str();

  auto* ensemble = app.add_subcommand("ensemble", "stochastic ensemble of a config");
  ensemble->add_option("config", config_path, "YAML config")->required();
  ensemble->add_option("-n", realizations, "number of realizations")->required();
  ensemble->add_option("--out", out_dir, "output directory (default: output.dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const char* out = out_dir.empty() ? nullptr : out_dir.c_str();
  if (*run) {
    qhd_config* c = nullptr;
    if (int rc = with_config(config_path, &c)) return rc;
    qhd_report* r = nullptr;
    const qhd_status s = qhd_run(c, out, &r);
    qhd_config_free(c);
    return report_out(s, r);
  }
  if (*ensemble) {
    qhd_config* c = nullptr;
    if (int rc = with_config(config_path, &c)) return rc;
    qhd_report* r = nullptr;
    const qhd_status s = qhd_ensemble(c, realizations, out, &r);
    qhd_config_free(c);
    return report_out(s, r);
  }
  if (*boost) {
    qhd_report* r = nullptr;
    const qhd_status s = qhd_boost_check(traj_path.c_str(), beta, points, boost_dir.c_str(), &r);
    return report_out(s, r);
  }
  const qhd_status s = qhd_extract(traj_path.c_str(), field.c_str(), csv_path.empty() ? nullptr : csv_path.c_str());
  if (s != QHD_OK) std::fprintf(stderr, "error: %s\n", qhd_last_error());
  return exit_code(s);
}
