#include "qhd/qhd.h"

#include <fstream>
#include <iostream>
#include <string>

#include "qhd/harness.hpp"
#include "qhd/hydro.hpp"

struct qhd_config {
  qhd::RunConfig config;
  std::string yaml;
};

struct qhd_report {
  qhd::RunResult result;
  std::string text;
};

struct qhd_trajectory {
  qhd::Trajectory traj;
};

namespace {

thread_local std::string last_error;

qhd_status set_error(qhd_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

qhd_status from_error(const qhd::Error& e) {
  return set_error(static_cast<qhd_status>(qhd::status_for(e)), e.what());
}

template <class F>
qhd_status guarded(F&& f) {
  last_error.clear();
  try {
    return f();
  } catch (const qhd::Error& e) {
    return from_error(e);
  } catch (const std::bad_alloc&) {
    return set_error(QHD_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return set_error(QHD_INTERNAL_ERROR, e.what());
  }
}

qhd_status wrap(qhd::RunResult r, qhd_report** report) {
  auto* h = new qhd_report{std::move(r), {}};
  h->text = h->result.report.text();
  *report = h;
  return static_cast<qhd_status>(h->result.status);
}

qhd_status make_config(qhd::RunConfig c, qhd_config** out) {
  auto* h = new qhd_config{std::move(c), {}};
  h->yaml = qhd::to_yaml(h->config);
  *out = h;
  return QHD_OK;
}

}  // namespace

extern "C" {

const char* qhd_version(void) { return qhd::artifact_version; }

const char* qhd_last_error(void) { return last_error.c_str(); }

qhd_status qhd_config_parse(const char* text, qhd_config** out) {
  if (!text || !out) return set_error(QHD_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return make_config(qhd::parse_config(text), out); });
}

qhd_status qhd_config_load(const char* path, qhd_config** out) {
  if (!path || !out) return set_error(QHD_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { return make_config(qhd::load_config(path), out); });
}

const char* qhd_config_yaml(const qhd_config* c) { return c ? c->yaml.c_str() : ""; }

const char* qhd_config_regime(const qhd_config* c) { return c ? qhd::to_string(c->config.regime) : ""; }

void qhd_config_free(qhd_config* c) { delete c; }

qhd_status qhd_run(const qhd_config* c, const char* out_dir, qhd_report** report) {
  if (!c || !report) return set_error(QHD_INVALID_ARGUMENT, "null argument");
  *report = nullptr;
  return guarded([&] { return wrap(qhd::run(c->config, out_dir ? out_dir : ""), report); });
}

qhd_status qhd_ensemble(const qhd_config* c, size_t n, const char* out_dir, qhd_report** report) {
  if (!c || !report) return set_error(QHD_INVALID_ARGUMENT, "null argument");
  *report = nullptr;
  return guarded([&] { return wrap(qhd::run_ensemble(c->config, n, out_dir ? out_dir : ""), report); });
}

qhd_status qhd_boost_check(const char* path, double beta, size_t points, const char* out_dir, qhd_report** report) {
  if (!path || !out_dir || !report) return set_error(QHD_INVALID_ARGUMENT, "null argument");
  *report = nullptr;
  return guarded([&] {
    qhd::BoostCheckOptions o;
    o.beta = beta;
    o.points = points;
    return wrap(qhd::boost_check(path, o, out_dir), report);
  });
}

qhd_status qhd_extract(const char* path, const char* field, const char* csv_path) {
  if (!path || !field) return set_error(QHD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (!csv_path) {
      qhd::extract_field(path, field, std::cout);
      return QHD_OK;
    }
    std::ofstream out(csv_path);
    if (!out) qhd::fail(qhd::ErrorKind::io, std::string("cannot write ") + csv_path);
    qhd::extract_field(path, field, out);
    return QHD_OK;
  });
}

const char* qhd_report_text(const qhd_report* r) { return r ? r->text.c_str() : ""; }

int qhd_report_get(const qhd_report* r, const char* key, double* value) {
  if (!r || !key || !value) return 0;
  const std::string* v = r->result.report.find(key);
  if (!v) return 0;
  try {
    std::size_t used = 0;
    const double d = std::stod(*v, &used);
    if (used != v->size()) return 0;
    *value = d;
    return 1;
  } catch (const std::exception&) {
    return 0;
  }
}

size_t qhd_report_failure_count(const qhd_report* r) { return r ? r->result.report.failures.size() : 0; }

const char* qhd_report_out_dir(const qhd_report* r) { return r ? r->result.out_dir.c_str() : ""; }

void qhd_report_free(qhd_report* r) { delete r; }

qhd_status qhd_trajectory_load(const char* path, qhd_trajectory** out) {
  if (!path || !out) return set_error(QHD_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new qhd_trajectory{qhd::load_trajectory(path)};
    return QHD_OK;
  });
}

size_t qhd_trajectory_frames(const qhd_trajectory* t) { return t ? t->traj.frames.size() : 0; }

size_t qhd_trajectory_points(const qhd_trajectory* t) { return t ? t->traj.frames.front().n_points() : 0; }

size_t qhd_trajectory_components(const qhd_trajectory* t) { return t ? t->traj.frames.front().n_components() : 0; }

double qhd_trajectory_dx(const qhd_trajectory* t) { return t ? t->traj.frames.front().grid().dx : 0.0; }

qhd_status qhd_trajectory_time(const qhd_trajectory* t, size_t frame, double* time) {
  if (!t || !time) return set_error(QHD_INVALID_ARGUMENT, "null argument");
  if (frame >= t->traj.frames.size()) return set_error(QHD_INVALID_ARGUMENT, "frame index out of range");
  *time = t->traj.frames[frame].time();
  return QHD_OK;
}

qhd_status qhd_trajectory_field(const qhd_trajectory* t, size_t frame, const char* name, double* out, size_t n) {
  if (!t || !name || !out) return set_error(QHD_INVALID_ARGUMENT, "null argument");
  if (frame >= t->traj.frames.size()) return set_error(QHD_INVALID_ARGUMENT, "frame index out of range");
  return guarded([&] {
    const qhd::Field f = qhd::hydro_field(qhd::extract(t->traj.frames[frame]), name);
    if (n != f.size()) return set_error(QHD_INVALID_ARGUMENT, "output length does not match the grid");
    std::copy(f.begin(), f.end(), out);
    return QHD_OK;
  });
}

void qhd_trajectory_free(qhd_trajectory* t) { delete t; }

}
