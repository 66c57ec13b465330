#include "qhd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qhd/hamiltonian.hpp"
#include "qhd/hydro.hpp"
#include "qhd/lorentz.hpp"
#include "qhd/noise.hpp"
#include "qhd/nonlinear.hpp"
#include "qhd/observables.hpp"
#include "qhd/packets.hpp"
#include "qhd/qhd1.hpp"

namespace qhd {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write " + p.string());
  out << std::setprecision(17);
  return out;
}

void finish(std::ofstream& out, const fs::path& p) {
  out.flush();
  if (!out) fail(ErrorKind::io, "write failed for " + p.string());
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

void write_text(const fs::path& p, const std::string& text) {
  auto out = open_out(p);
  out << text;
  finish(out, p);
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void write(const fs::path& p) const {
    auto out = open_out(p);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << "\n";
    }
    finish(out, p);
  }
};

json manifest_base(const std::string& regime) {
  json m;
  m["artifact"] = "qhd";
  m["version"] = artifact_version;
  m["regime"] = regime;
  m["dump_basis"] = "chiral";
  return m;
}

void write_manifest(const fs::path& dir, const json& m) { write_text(dir / "manifest.json", m.dump(2) + "\n"); }

void dump_frames(const fs::path& dir, const std::vector<SpinorField>& frames) {
  std::vector<SpinorField> out;
  out.reserve(frames.size());
  for (const auto& f : frames)
    out.push_back(f.n_components() == 4 ? to_representation(f, Representation::chiral_as_paper) : f);
  save_qhd1((dir / "trajectory.qhd1").string(), out);
}

double norm_drift(const std::vector<double>& norms) {
  double d = 0.0;
  for (double n : norms) d = std::max(d, std::abs(n / norms.front() - 1.0));
  return d;
}

EvolveConfig evolve_config(const RunConfig& c, const GridSpec& grid) {
  EvolveConfig e;
  e.dt = grid.dt;
  e.n_steps = c.evolve.steps;
  e.record_every = c.evolve.record_every;
  e.adjoint_check = c.evolve.adjoint_check;
  return e;
}

NoiseSpec noise_spec(const RunConfig& c) {
  NoiseSpec s;
  s.T = c.noise.T;
  s.lambda_c = c.noise.lambda_c;
  s.kappa = c.noise.kappa;
  s.rho_floor = c.noise.rho_floor;
  if (!c.seed) throw ConfigError({"seed: required for stochastic runs"});
  s.seed = *c.seed;
  return s;
}

// Continuity residual at the middle of three frames spaced H, and again with dt and H halved.
std::pair<double, double> continuity_pair(const SpinorField& psi0, const EMFieldSet& em, const EvolveConfig& base) {
  double l2[2];
  for (int level = 0; level < 2; ++level) {
    EvolveConfig c;
    c.dt = base.dt / (level ? 2.0 : 1.0);
    c.record_every = base.record_every;
    c.n_steps = 2 * base.record_every;
    const Trajectory t = evolve(psi0, em, c);
    l2[level] = continuity_residual(extract(t.frames[0]), extract(t.frames[1]), extract(t.frames[2])).l2;
  }
  return {l2[0], l2[1]};
}

double pair_null(const std::vector<HydroFrame>& h) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < h.size(); ++i) {
    const QuantumPotential q = quantum_potential(h[i - 1], h[i], h[i + 1]);
    if (q.max_abs_B > 0.0) worst = std::max(worst, q.max_abs_contraction / q.max_abs_B);
  }
  return worst;
}

void run_dirac(const RunConfig& c, const fs::path& dir, RunResult& res, json& m) {
  const GridSpec grid = make_grid(c);
  const EMFieldSet em = make_field(c, grid);
  const SpinorField psi0 = make_dirac_packet(c, grid);
  const EvolveConfig ec = evolve_config(c, grid);
  const Trajectory t = evolve(psi0, em, ec);
  const GammaSet g = build_gammas(psi0.representation());

  Csv csv{{"t", "norm", "mean_z", "width", "energy"}, {}};
  std::vector<double> norms, energies;
  std::vector<HydroFrame> hydro;
  for (const auto& f : t.frames) {
    norms.push_back(norm2(f));
    energies.push_back(energy_expectation(f, em, g));
    csv.rows.push_back({f.time(), norms.back(), mean_position(f), position_width(f), energies.back()});
    hydro.push_back(extract(f));
  }
  csv.write(dir / "series.csv");
  if (c.output.frames) dump_frames(dir, t.frames);

  Report& r = res.report;
  r.add("frames", static_cast<double>(t.frames.size()));
  r.add("courant", grid.courant());
  const double drift = norm_drift(norms);
  r.gate("norm_drift", drift, drift < 1e-10);
  r.add("energy_drift", std::abs(energies.back() - energies.front()) / std::max(1e-300, std::abs(energies.front())));
  if (ec.adjoint_check) r.add("adjoint_deviation", t.adjoint_deviation);
  const auto [coarse, fine] = continuity_pair(psi0, em, ec);
  r.add("continuity_l2_coarse", coarse);
  r.add("continuity_l2_fine", fine);
  const double ratio = fine > 0.0 ? coarse / fine : std::numeric_limits<double>::infinity();
  r.gate("continuity_order_ratio", ratio, ratio >= 3.5 || fine < 1e-9);
  if (hydro.size() >= 3) {
    const double pn = pair_null(hydro);
    r.gate("pair_null", pn, pn < 1e-9);
  }
  m["frame_dt"] = t.frame_dt();
}

void run_pauli(const RunConfig& c, const fs::path& dir, RunResult& res, json& m) {
  const GridSpec grid = make_grid(c);
  const EMFieldSet em = make_field(c, grid);
  const PauliState s0 = make_pauli_packet(c, grid);
  const auto frames = pauli_evolve(s0, em, grid.dt, c.evolve.steps, c.evolve.record_every);
  Csv csv{{"t", "norm", "mean_z", "width", "sx", "sy", "sz"}, {}};
  std::vector<double> norms;
  std::vector<SpinorField> xi;
  for (const auto& s : frames) {
    norms.push_back(norm2(s.xi));
    const auto sp = mean_spin(s);
    csv.rows.push_back({s.xi.time(), norms.back(), mean_position(s.xi), position_width(s.xi), sp[0], sp[1], sp[2]});
    xi.push_back(s.xi);
  }
  csv.write(dir / "series.csv");
  if (c.output.frames) dump_frames(dir, xi);
  const double drift = norm_drift(norms);
  res.report.add("frames", static_cast<double>(frames.size()));
  res.report.add("mu", effective_mu(s0, em));
  res.report.gate("norm_drift", drift, drift < 1e-10);
  m["frame_dt"] = grid.dt * static_cast<double>(c.evolve.record_every);
}

void run_stochastic(const RunConfig& c, const fs::path& dir, RunResult& res, json& m) {
  const GridSpec grid = make_grid(c);
  const EMFieldSet em = make_field(c, grid);
  const SpinorField psi0 = make_dirac_packet(c, grid);
  const NoiseSpec spec = resolve(noise_spec(c), em.mass);
  std::vector<StochasticStepLog> logs;
  const Trajectory t = evolve_stochastic(psi0, em, spec, evolve_config(c, grid), &logs);
  Csv csv{{"t", "norm", "mean_z", "width"}, {}};
  std::vector<double> norms;
  for (const auto& f : t.frames) {
    norms.push_back(norm2(f));
    csv.rows.push_back({f.time(), norms.back(), mean_position(f), position_width(f)});
  }
  csv.write(dir / "series.csv");
  Csv steps{{"step", "norm_before", "correction", "clamped_points"}, {}};
  double max_corr = 0.0, mean_corr = 0.0;
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    steps.rows.push_back({static_cast<double>(i + 1), logs[i].norm_before, logs[i].correction,
                          static_cast<double>(logs[i].clamped_points)});
    max_corr = std::max(max_corr, std::abs(logs[i].correction));
    mean_corr += std::abs(logs[i].correction);
    clamped += logs[i].clamped_points;
  }
  if (!logs.empty()) mean_corr /= static_cast<double>(logs.size());
  steps.write(dir / "noise_steps.csv");
  if (c.output.frames) dump_frames(dir, t.frames);

  Report& r = res.report;
  r.add("T", spec.T);
  r.add("lambda_c", spec.lambda_c);
  r.add("under_resolved", spec.lambda_c < 2.0 * grid.dx ? 1.0 : 0.0);
  r.add("max_abs_correction", max_corr);
  r.add("mean_abs_correction", mean_corr);
  r.add("clamped_points", static_cast<double>(clamped));
  const double drift = norm_drift(norms);
  r.gate("norm_drift", drift, drift < 1e-10);
  m["frame_dt"] = t.frame_dt();
}

void run_nonlinear(const RunConfig& c, const fs::path& dir, RunResult& res, json& m) {
  const GridSpec grid = make_grid(c);
  const EMFieldSet em = make_field(c, grid);
  const SpinorField psi0 = make_dirac_packet(c, grid);
  const EvolveConfig ec = evolve_config(c, grid);
  const ClassicalRun nl = evolve_classical(psi0, em, ec);
  const WidthSeries ws = width_series(nl);
  const WidthSeries lin = width_series(evolve(psi0, em, ec));
  Csv csv{{"t", "width", "centroid", "width_linear", "centroid_linear"}, {}};
  for (std::size_t i = 0; i < ws.times.size(); ++i)
    csv.rows.push_back({ws.times[i], ws.width[i], ws.centroid[i], lin.width[i], lin.centroid[i]});
  csv.write(dir / "series.csv");
  Csv corr{{"step", "norm_correction"}, {}};
  double max_corr = 0.0, mean_corr = 0.0;
  for (std::size_t i = 0; i < nl.norm_correction.size(); ++i) {
    corr.rows.push_back({static_cast<double>(i + 1), nl.norm_correction[i]});
    max_corr = std::max(max_corr, std::abs(nl.norm_correction[i]));
    mean_corr += std::abs(nl.norm_correction[i]);
  }
  if (!nl.norm_correction.empty()) mean_corr /= static_cast<double>(nl.norm_correction.size());
  corr.write(dir / "norm_corrections.csv");
  if (c.output.frames) dump_frames(dir, nl.trajectory.frames);

  Report& r = res.report;
  double ratio = std::numeric_limits<double>::quiet_NaN();
  if (lin.width.back() != lin.width.front()) ratio = spreading_ratio(ws, lin);
  r.add("width_growth", ws.width.back() - ws.width.front());
  r.add("width_growth_linear", lin.width.back() - lin.width.front());
  r.add("spreading_ratio", ratio);
  r.add("max_abs_norm_correction", max_corr);
  r.add("mean_abs_norm_correction", mean_corr);
  r.add("max_mask_growth", nl.max_mask_growth);
  std::vector<double> norms;
  for (const auto& f : nl.trajectory.frames) norms.push_back(norm2(f));
  const double drift = norm_drift(norms);
  r.gate("norm_drift", drift, drift < 1e-10);
  m["frame_dt"] = nl.trajectory.frame_dt();
}

void run_compare(const RunConfig& c, const fs::path&, RunResult& res, json&) {
  const GridSpec grid = make_grid(c);
  const EMFieldSet em = make_field(c, grid);
  const double th = c.packet.theta, ph = c.packet.phi;
  const std::array<cplx, 2> spin{std::polar(std::cos(0.5 * th), -0.5 * ph), std::polar(std::sin(0.5 * th), 0.5 * ph)};
  const MatchedStates ms = matched_states(grid, c.packet.center, c.packet.width, c.compare.velocity, em.mass, spin);
  const DiracPauliComparison d = dirac_vs_pauli(ms.dirac, ms.pauli, em, c.compare.duration, c.compare.steps);
  Report& r = res.report;
  r.add("velocity", c.compare.velocity);
  r.add("t_final", d.t_final);
  r.add("rho_distance", d.rho_distance);
  r.add("velocity_distance", d.velocity_distance);
  r.add("negative_energy_weight", d.negative_energy_weight);
}

void histogram(const VquReport& v, const fs::path& p) {
  Csv h{{"log10_lo", "log10_hi", "count0", "count1", "count2", "count3"}, {}};
  for (int b = -16; b < 2; ++b) h.rows.push_back({double(b), double(b + 1), 0, 0, 0, 0});
  for (int a = 0; a < 4; ++a) {
    const double scale = v.V[a].scale;
    if (scale <= 0.0) continue;
    for (double d : v.deviation[a]) {
      if (d == 0.0) continue;
      const int b = std::clamp(static_cast<int>(std::floor(std::log10(std::abs(d) / scale))), -16, 1);
      h.rows[b + 16][2 + a] += 1.0;
    }
  }
  h.write(p);
}

}  // namespace

RunStatus status_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::io: return RunStatus::io_error;
    case ErrorKind::numerical_blowup: return RunStatus::invariant_failure;
    default: return RunStatus::config_error;
  }
}

void Report::add(const std::string& key, double value) { entries.emplace_back(key, fmt(value)); }
void Report::add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }

void Report::gate(const std::string& key, double value, bool ok) {
  add(key, value);
  add(key + ".pass", ok ? "1" : "0");
  if (!ok) failures.push_back(key);
}

const std::string* Report::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

std::string Report::text() const {
  std::string s;
  for (const auto& [k, v] : entries) s += k + " = " + v + "\n";
  s += "status = " + std::string(failures.empty() ? "ok" : "invariant_failure") + "\n";
  return s;
}

GridSpec make_grid(const RunConfig& c) { return GridSpec::make(c.grid.n, c.grid.dx, c.grid.dt, c.grid.t0); }

EMFieldSet make_field(const RunConfig& c, const GridSpec& grid) {
  const FieldConfig& f = c.field;
  EMFieldSet em;
  if (f.type == "free") {
    em = EMFieldSet::free(grid, f.mass, f.charge);
  } else if (f.type == "uniform_e") {
    em = EMFieldSet::uniform_e(grid, f.E, f.mass, f.charge);
  } else if (f.type == "harmonic") {
    em = EMFieldSet::harmonic(grid, f.omega, f.mass, f.charge);
  } else if (f.type == "tabulated") {
    std::ifstream in(f.table);
    if (!in) fail(ErrorKind::io, "cannot read field table " + f.table);
    std::vector<double> W, A;
    double w = 0.0, a = 0.0;
    while (in >> w >> a) {
      W.push_back(w);
      A.push_back(a);
    }
    if (!in.eof()) fail(ErrorKind::config, "field.table: malformed line " + std::to_string(W.size() + 1));
    if (W.size() != grid.n_points)
      fail(ErrorKind::config, "field.table: expected " + std::to_string(grid.n_points) + " rows, got " +
                                  std::to_string(W.size()));
    em = EMFieldSet::tabulated(grid, std::move(W), std::move(A), f.mass, f.charge);
  } else {
    fail(ErrorKind::config, "field.type: unknown " + f.type);
  }
  em.B_ext = f.B;
  return em;
}

SpinorField make_dirac_packet(const RunConfig& c, const GridSpec& grid) {
  const PacketConfig& p = c.packet;
  const double m = c.field.mass;
  if (p.branch != 0) {
    SpinorField psi = branch_packet(grid, p.center, p.width, p.momentum, m, p.branch, p.pair, p.representation);
    psi.set_time(grid.t0);
    return psi;
  }
  SpinorField psi = branch_packet(grid, p.center, p.width, p.momentum, m, +1, p.pair, p.representation);
  const SpinorField neg = branch_packet(grid, p.center, p.width, p.momentum, m, -1, p.pair, p.representation);
  for (std::size_t i = 0; i < psi.data().size(); ++i) psi.data()[i] += neg.data()[i];
  normalize(psi);
  psi.set_time(grid.t0);
  return psi;
}

PauliState make_pauli_packet(const RunConfig& c, const GridSpec& grid) {
  const PacketConfig& p = c.packet;
  const auto env = gaussian_envelope(grid, p.center, p.width, p.momentum);
  const cplx up = std::polar(std::cos(0.5 * p.theta), -0.5 * p.phi);
  const cplx down = std::polar(std::sin(0.5 * p.theta), 0.5 * p.phi);
  SpinorField xi(grid, 2, grid.t0);
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    xi(0, j) = env[j] * up;
    xi(1, j) = env[j] * down;
  }
  normalize(xi);
  return make_pauli_state(xi, c.field.B, c.field.mu);
}

RunResult run(const RunConfig& config, const std::string& out_dir) {
  RunResult res;
  res.out_dir = out_dir.empty() ? config.output.dir : out_dir;
  if (config.regime == Regime::boost_check) {
    if (config.boost.trajectory.empty())
      fail(ErrorKind::precondition, "boost_check needs boost.trajectory pointing at a stored trajectory.qhd1");
    BoostCheckOptions o{config.boost.beta, config.boost.points, config.boost.t_prime};
    RunResult r = boost_check(config.boost.trajectory, o, res.out_dir);
    const fs::path dir(r.out_dir);
    json m = json::parse(std::ifstream(dir / "manifest.json"));
    m["config"] = to_yaml(config);
    write_manifest(dir, m);
    return r;
  }

  const fs::path dir = prepare_dir(res.out_dir);
  json m = manifest_base(to_string(config.regime));
  m["config"] = to_yaml(config);
  if (config.seed) m["seed"] = *config.seed;
  m["artifacts"] = json::array();

  switch (config.regime) {
    case Regime::dirac: run_dirac(config, dir, res, m); break;
    case Regime::pauli: run_pauli(config, dir, res, m); break;
    case Regime::stochastic: run_stochastic(config, dir, res, m); break;
    case Regime::nonlinear: run_nonlinear(config, dir, res, m); break;
    case Regime::compare: run_compare(config, dir, res, m); break;
    case Regime::boost_check: break;
  }
  write_text(dir / "report.txt", res.report.text());
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename() != "manifest.json") m["artifacts"].push_back(e.path().filename().string());
  std::sort(m["artifacts"].begin(), m["artifacts"].end());
  write_manifest(dir, m);
  res.status = res.report.failures.empty() ? RunStatus::ok : RunStatus::invariant_failure;
  return res;
}

RunResult run_ensemble(const RunConfig& config, std::size_t n_realizations, const std::string& out_dir) {
  if (n_realizations < 2) fail(ErrorKind::config, "ensemble needs at least two realizations");
  RunResult res;
  res.out_dir = out_dir.empty() ? config.output.dir : out_dir;
  const GridSpec grid = make_grid(config);
  const EMFieldSet em = make_field(config, grid);
  const SpinorField psi0 = make_dirac_packet(config, grid);
  const NoiseSpec spec = resolve(noise_spec(config), em.mass);
  EnsembleOptions opt;
  opt.n_realizations = n_realizations;
  const EnsembleReport er = ensemble_run(psi0, em, spec, evolve_config(config, grid), opt);

  const fs::path dir = prepare_dir(res.out_dir);
  Csv rho{{"t", "z", "mean_rho", "var_rho"}, {}};
  for (std::size_t i = 0; i < er.times.size(); ++i)
    for (std::size_t j = 0; j < grid.n_points; ++j)
      rho.rows.push_back({er.times[i], grid.z(j), er.mean_rho[i][j], er.var_rho[i][j]});
  rho.write(dir / "ensemble.csv");
  Csv norms{{"t"}, {}};
  for (std::size_t r = 0; r < n_realizations; ++r) norms.header.push_back("raw_norm" + std::to_string(r));
  for (std::size_t i = 0; i < er.times.size(); ++i) {
    std::vector<double> row{er.times[i]};
    for (std::size_t r = 0; r < n_realizations; ++r) row.push_back(er.raw_norm[r][i]);
    norms.rows.push_back(std::move(row));
  }
  norms.write(dir / "raw_norm.csv");

  Report& r = res.report;
  r.add("realizations", static_cast<double>(n_realizations));
  r.add("T", spec.T);
  r.add("lambda_c", spec.lambda_c);
  double mc = 0.0;
  std::size_t clamped = 0;
  for (std::size_t k = 0; k < n_realizations; ++k) {
    mc += er.mean_abs_correction[k];
    clamped += er.clamped_points[k];
  }
  r.add("mean_abs_correction", mc / static_cast<double>(n_realizations));
  r.add("clamped_points", static_cast<double>(clamped));
  double mass_err = 0.0;
  for (std::size_t i = 0; i < er.times.size(); ++i) {
    double q = 0.0;
    for (double v : er.mean_rho[i]) q += v * grid.dx;
    mass_err = std::max(mass_err, std::abs(q - 1.0));
  }
  r.gate("mean_norm_drift", mass_err, mass_err < 1e-10);
  write_text(dir / "report.txt", r.text());

  json m = manifest_base("ensemble");
  m["config"] = to_yaml(config);
  m["seed"] = spec.seed;
  m["realizations"] = n_realizations;
  m["artifacts"] = {"ensemble.csv", "raw_norm.csv", "report.txt"};
  write_manifest(dir, m);
  res.status = r.failures.empty() ? RunStatus::ok : RunStatus::invariant_failure;
  return res;
}

Trajectory load_trajectory(const std::string& path) {
  if (!fs::exists(path)) fail(ErrorKind::precondition, "no stored trajectory at " + path);
  Trajectory t;
  t.frames = load_qhd1(path);
  if (t.frames.empty()) fail(ErrorKind::precondition, "stored trajectory " + path + " has no frames");
  for (auto& f : t.frames)
    if (f.n_components() == 4) f.set_representation(Representation::chiral_as_paper);
  t.config.record_every = 1;
  t.config.n_steps = t.frames.size() - 1;
  t.config.dt = t.frames.size() > 1 ? (t.frames.back().time() - t.frames.front().time()) /
                                          static_cast<double>(t.frames.size() - 1)
                                    : 0.0;
  return t;
}

RunResult boost_check(const std::string& path, const BoostCheckOptions& o, const std::string& out_dir) {
  const Trajectory t = load_trajectory(path);
  if (t.frames.front().n_components() != 4) fail(ErrorKind::precondition, "boost_check needs a Dirac trajectory");
  const GridSpec& g0 = t.frames.front().grid();
  const std::size_t points = o.points ? o.points : g0.n_points / 2;
  const GridSpec pg = GridSpec::make(points, g0.dx);
  const double tp = std::isnan(o.t_prime) ? 0.5 * (t.frames.front().time() + t.frames.back().time()) : o.t_prime;
  const BoostSpec b = make_boost(o.beta);

  const CovarianceReport cov = current_covariance_check(t, b, {pg, {tp}});
  const VquReport v = vqu_invariance_check(t, b, pg, tp, t.config.dt);

  RunResult res;
  res.out_dir = out_dir;
  const fs::path dir = prepare_dir(out_dir);
  Report& r = res.report;
  r.add("beta", b.beta);
  r.add("gamma", b.gamma);
  r.add("t_prime", tp);
  r.add("primed_points", static_cast<double>(points));
  r.add("frame_dt", t.frames.size() > 1 ? t.frames[1].time() - t.frames[0].time() : 0.0);
  r.add("field", "free (potentials are not boosted)");
  for (int mu = 0; mu < 4; ++mu) r.add("J" + std::to_string(mu) + ".deviation", cov.deviation[mu]);
  r.gate("j_covariance", cov.max_deviation, cov.max_deviation < 1e-4);
  r.add("charge", cov.charge);
  r.add("charge_primed", cov.primed_charge.front());
  r.gate("charge_error", cov.max_charge_error, cov.max_charge_error < 1e-6);
  for (int a = 0; a < 4; ++a) {
    const std::string k = "V" + std::to_string(a);
    r.add(k + ".max_abs_dev", v.V[a].max_abs);
    r.add(k + ".rms_dev", v.V[a].rms);
    r.add(k + ".relative", v.V[a].relative());
    r.add("rhoV" + std::to_string(a) + ".relative", v.rho_V[a].relative());
  }
  r.add("V_sum.max_abs_dev", v.contraction.max_abs);
  r.add("vqu_compared_points", static_cast<double>(v.compared_points));
  r.add("vqu_mask_overlap", v.mask_overlap);
  if (v.low_overlap) r.add("warning", "valid-mask overlap below 50%");

  Csv dev{{"z_prime", "dev0", "dev1", "dev2", "dev3"}, {}};
  for (std::size_t j = 0; j < v.z_prime.size(); ++j)
    dev.rows.push_back({v.z_prime[j], v.deviation[0][j], v.deviation[1][j], v.deviation[2][j], v.deviation[3][j]});
  dev.write(dir / "vqu_deviation.csv");
  histogram(v, dir / "vqu_histogram.csv");
  write_text(dir / "report.txt", r.text());

  json m = manifest_base("boost_check");
  m["trajectory"] = path;
  m["trajectory_bytes"] = fs::file_size(path);
  m["beta"] = o.beta;
  m["points"] = points;
  m["t_prime"] = tp;
  m["artifacts"] = {"report.txt", "vqu_deviation.csv", "vqu_histogram.csv"};
  write_manifest(dir, m);
  res.status = r.failures.empty() ? RunStatus::ok : RunStatus::invariant_failure;
  return res;
}

void extract_field(const std::string& path, const std::string& name, std::ostream& csv) {
  const Trajectory t = load_trajectory(path);
  const auto names = hydro_field_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    fail(ErrorKind::invalid_argument, "unknown field " + name);
  csv << std::setprecision(17) << "t,z," << name << "\n";
  for (const auto& f : t.frames) {
    const Field v = hydro_field(extract(f), name);
    for (std::size_t j = 0; j < v.size(); ++j) csv << f.time() << "," << f.grid().z(j) << "," << v[j] << "\n";
  }
  if (!csv) fail(ErrorKind::io, "write failed while extracting " + name);
}

}  // namespace qhd
