#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "qhd/qhd.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static const char* cfg_text =
    "regime: dirac\n"
    "grid: {n: 128, dx: 0.25}\n"
    "packet: {width: 2.5, momentum: 0.3}\n"
    "evolve: {steps: 200, record_every: 40}\n";

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : "capi_out";
  char path[1024];

  EXPECT(strlen(qhd_version()) > 0);

  qhd_config* bad = NULL;
  EXPECT(qhd_config_parse("regime: warp\ngrid: {n: 100}\n", &bad) == QHD_CONFIG_ERROR);
  EXPECT(bad == NULL);
  EXPECT(strstr(qhd_last_error(), "regime") != NULL);
  EXPECT(strstr(qhd_last_error(), "grid.n") != NULL);
  EXPECT(qhd_config_load("/nonexistent/qhd.yaml", &bad) == QHD_IO_ERROR);
  EXPECT(qhd_config_parse(NULL, &bad) == QHD_INVALID_ARGUMENT);

  qhd_config* cfg = NULL;
  EXPECT(qhd_config_parse(cfg_text, &cfg) == QHD_OK);
  if (!cfg) return 1;
  EXPECT(strcmp(qhd_config_regime(cfg), "dirac") == 0);
  EXPECT(strstr(qhd_config_yaml(cfg), "n: 128") != NULL);

  qhd_report* rep = NULL;
  EXPECT(qhd_run(cfg, dir, &rep) == QHD_OK);
  if (!rep) return 1;
  double drift = -1.0;
  EXPECT(qhd_report_get(rep, "norm_drift", &drift) == 1);
  EXPECT(drift >= 0.0 && drift < 1e-10);
  EXPECT(qhd_report_get(rep, "no_such_key", &drift) == 0);
  EXPECT(qhd_report_failure_count(rep) == 0);
  EXPECT(strstr(qhd_report_text(rep), "status = ok") != NULL);
  EXPECT(strcmp(qhd_report_out_dir(rep), dir) == 0);
  qhd_report_free(rep);
  qhd_config_free(cfg);

  snprintf(path, sizeof path, "%s/trajectory.qhd1", dir);
  qhd_trajectory* traj = NULL;
  EXPECT(qhd_trajectory_load(path, &traj) == QHD_OK);
  if (!traj) return 1;
  EXPECT(qhd_trajectory_frames(traj) == 6);
  EXPECT(qhd_trajectory_points(traj) == 128);
  EXPECT(qhd_trajectory_components(traj) == 4);
  EXPECT(fabs(qhd_trajectory_dx(traj) - 0.25) < 1e-15);
  double t = -1.0;
  EXPECT(qhd_trajectory_time(traj, 5, &t) == QHD_OK);
  EXPECT(fabs(t - 200 * 0.025) < 1e-12);
  EXPECT(qhd_trajectory_time(traj, 6, &t) == QHD_INVALID_ARGUMENT);

  double rho[128];
  EXPECT(qhd_trajectory_field(traj, 5, "rho", rho, 128) == QHD_OK);
  double total = 0.0;
  for (int j = 0; j < 128; ++j) total += rho[j] * 0.25;
  EXPECT(fabs(total - 1.0) < 1e-10);
  EXPECT(qhd_trajectory_field(traj, 0, "rho", rho, 64) == QHD_INVALID_ARGUMENT);
  EXPECT(qhd_trajectory_field(traj, 0, "nonsense", rho, 128) != QHD_OK);
  qhd_trajectory_free(traj);

  snprintf(path, sizeof path, "%s/trajectory.qhd1", dir);
  char csv[1024];
  snprintf(csv, sizeof csv, "%s/rho.csv", dir);
  EXPECT(qhd_extract(path, "rho", csv) == QHD_OK);
  FILE* f = fopen(csv, "r");
  EXPECT(f != NULL);
  if (f) {
    char line[256];
    EXPECT(fgets(line, sizeof line, f) != NULL);
    EXPECT(strncmp(line, "t,z,rho", 7) == 0);
    fclose(f);
  }

  EXPECT(qhd_trajectory_load("/nonexistent/x.qhd1", &traj) != QHD_OK);
  EXPECT(strlen(qhd_last_error()) > 0);

  qhd_config_free(NULL);
  qhd_report_free(NULL);
  qhd_trajectory_free(NULL);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
