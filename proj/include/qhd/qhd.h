#ifndef QHD_QHD_H
#define QHD_QHD_H

#include <stddef.h>

#if defined(_WIN32)
#define QHD_API __declspec(dllexport)
#elif defined(__GNUC__)
#define QHD_API __attribute__((visibility("default")))
#else
#define QHD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 0-3 double as CLI exit codes. */
typedef enum qhd_status {
  QHD_OK = 0,
  QHD_INVARIANT_FAILURE = 1,
  QHD_CONFIG_ERROR = 2,
  QHD_IO_ERROR = 3,
  QHD_INVALID_ARGUMENT = 4,
  QHD_INTERNAL_ERROR = 5
} qhd_status;

typedef struct qhd_config qhd_config;
typedef struct qhd_report qhd_report;
typedef struct qhd_trajectory qhd_trajectory;

QHD_API const char* qhd_version(void);

/* Message of the last failed call on this thread ("" if none). Config errors list
   every violation, one per line. */
QHD_API const char* qhd_last_error(void);

QHD_API qhd_status qhd_config_parse(const char* text, qhd_config** out);
QHD_API qhd_status qhd_config_load(const char* path, qhd_config** out);
/* Resolved config as YAML; owned by the handle. */
QHD_API const char* qhd_config_yaml(const qhd_config* config);
QHD_API const char* qhd_config_regime(const qhd_config* config);
QHD_API void qhd_config_free(qhd_config* config);

/* out_dir may be NULL to use output.dir from the config. On QHD_OK or
   QHD_INVARIANT_FAILURE *report is set and must be freed. */
QHD_API qhd_status qhd_run(const qhd_config* config, const char* out_dir, qhd_report** report);
QHD_API qhd_status qhd_ensemble(const qhd_config* config, size_t realizations, const char* out_dir,
                                qhd_report** report);
/* points = 0 picks half the stored grid. */
QHD_API qhd_status qhd_boost_check(const char* trajectory_path, double beta, size_t points, const char* out_dir,
                                   qhd_report** report);
/* csv_path NULL writes to stdout. */
QHD_API qhd_status qhd_extract(const char* trajectory_path, const char* field, const char* csv_path);

QHD_API const char* qhd_report_text(const qhd_report* report);
/* Returns 1 and stores the value when key exists and is numeric, else 0. */
QHD_API int qhd_report_get(const qhd_report* report, const char* key, double* value);
QHD_API size_t qhd_report_failure_count(const qhd_report* report);
QHD_API const char* qhd_report_out_dir(const qhd_report* report);
QHD_API void qhd_report_free(qhd_report* report);

QHD_API qhd_status qhd_trajectory_load(const char* path, qhd_trajectory** out);
QHD_API size_t qhd_trajectory_frames(const qhd_trajectory* traj);
QHD_API size_t qhd_trajectory_points(const qhd_trajectory* traj);
QHD_API size_t qhd_trajectory_components(const qhd_trajectory* traj);
QHD_API double qhd_trajectory_dx(const qhd_trajectory* traj);
QHD_API qhd_status qhd_trajectory_time(const qhd_trajectory* traj, size_t frame, double* t);
/* Hydrodynamic field (rho, qdot, J0..J3, ...) of one frame into out[0..n). */
QHD_API qhd_status qhd_trajectory_field(const qhd_trajectory* traj, size_t frame, const char* name, double* out,
                                        size_t n);
QHD_API void qhd_trajectory_free(qhd_trajectory* traj);

#ifdef __cplusplus
}
#endif

#endif
