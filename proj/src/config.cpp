#include "qhd/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace qhd {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s = "invalid configuration:";
  for (const auto& e : v) s += "\n  " + e;
  return s;
}

class Reader {
 public:
  std::vector<std::string> errors;

  void keys(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!node.IsMap()) {
      errors.push_back(path + ": expected a mapping");
      return;
    }
    for (const auto& kv : node) {
      const std::string k = kv.first.as<std::string>();
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) errors.push_back(key(path, k) + ": unknown key");
    }
  }

  void number(const YAML::Node& sec, const std::string& path, const char* name, double& out) {
    const YAML::Node n = sec[name];
    if (!n) return;
    try {
      out = n.as<double>();
      if (!std::isfinite(out)) errors.push_back(key(path, name) + ": must be finite");
    } catch (const YAML::Exception&) {
      errors.push_back(key(path, name) + ": expected a number");
    }
  }

  void count(const YAML::Node& sec, const std::string& path, const char* name, std::size_t& out) {
    const YAML::Node n = sec[name];
    if (!n) return;
    try {
      const long long v = n.as<long long>();
      if (v < 0) {
        errors.push_back(key(path, name) + ": must be >= 0");
        return;
      }
      out = static_cast<std::size_t>(v);
    } catch (const YAML::Exception&) {
      errors.push_back(key(path, name) + ": expected a non-negative integer");
    }
  }

  void text(const YAML::Node& sec, const std::string& path, const char* name, std::string& out) {
    const YAML::Node n = sec[name];
    if (!n) return;
    if (!n.IsScalar()) {
      errors.push_back(key(path, name) + ": expected a string");
      return;
    }
    out = n.as<std::string>();
  }

  void flag(const YAML::Node& sec, const std::string& path, const char* name, bool& out) {
    const YAML::Node n = sec[name];
    if (!n) return;
    try {
      out = n.as<bool>();
    } catch (const YAML::Exception&) {
      errors.push_back(key(path, name) + ": expected true or false");
    }
  }

  void check(bool ok, const std::string& path, const std::string& what) {
    if (!ok) errors.push_back(path + ": " + what);
  }

  static std::string key(const std::string& path, const std::string& name) {
    return path.empty() ? name : path + "." + name;
  }
};

bool power_of_two(std::size_t n) { return n >= 8 && (n & (n - 1)) == 0; }

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::dirac: return "dirac";
    case Regime::pauli: return "pauli";
    case Regime::stochastic: return "stochastic";
    case Regime::nonlinear: return "nonlinear";
    case Regime::boost_check: return "boost_check";
    case Regime::compare: return "compare";
  }
  return "?";
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(ErrorKind::config, join(violations)), violations_(std::move(violations)) {}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({std::string("syntax: ") + e.what()});
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);

  Reader r;
  RunConfig c;
  r.keys(root, "", {"regime", "seed", "grid", "packet", "field", "evolve", "noise", "ensemble", "boost", "compare",
                    "output"});
  if (!r.errors.empty() && !root.IsMap()) throw ConfigError(r.errors);

  if (const YAML::Node n = root["regime"]) {
    const std::string s = n.IsScalar() ? n.as<std::string>() : "";
    bool found = false;
    for (Regime g : {Regime::dirac, Regime::pauli, Regime::stochastic, Regime::nonlinear, Regime::boost_check,
                     Regime::compare})
      if (s == to_string(g)) {
        c.regime = g;
        found = true;
      }
    r.check(found, "regime", "expected one of dirac, pauli, stochastic, nonlinear, boost_check, compare");
  }
  if (const YAML::Node n = root["seed"]) {
    try {
      const long long v = n.as<long long>();
      r.check(v >= 0, "seed", "must be >= 0");
      if (v >= 0) c.seed = static_cast<std::uint64_t>(v);
    } catch (const YAML::Exception&) {
      r.errors.push_back("seed: expected a non-negative integer");
    }
  }

  if (const YAML::Node g = root["grid"]) {
    r.keys(g, "grid", {"n", "dx", "dt", "t0"});
    if (g.IsMap()) {
      r.count(g, "grid", "n", c.grid.n);
      r.number(g, "grid", "dx", c.grid.dx);
      r.number(g, "grid", "dt", c.grid.dt);
      r.number(g, "grid", "t0", c.grid.t0);
    }
  }
  r.check(power_of_two(c.grid.n), "grid.n", "must be a power of two >= 8");
  r.check(c.grid.dx > 0.0, "grid.dx", "must be > 0");
  r.check(c.grid.dt >= 0.0, "grid.dt", "must be >= 0");

  if (const YAML::Node p = root["packet"]) {
    r.keys(p, "packet", {"center", "width", "momentum", "branch", "pair", "representation", "theta", "phi"});
    if (p.IsMap()) {
      r.number(p, "packet", "center", c.packet.center);
      r.number(p, "packet", "width", c.packet.width);
      r.number(p, "packet", "momentum", c.packet.momentum);
      r.number(p, "packet", "theta", c.packet.theta);
      r.number(p, "packet", "phi", c.packet.phi);
      if (const YAML::Node b = p["branch"]) {
        const std::string s = b.IsScalar() ? b.as<std::string>() : "";
        if (s == "positive" || s == "+1" || s == "1") c.packet.branch = 1;
        else if (s == "negative" || s == "-1") c.packet.branch = -1;
        else if (s == "superposition" || s == "0") c.packet.branch = 0;
        else r.errors.push_back("packet.branch: expected positive, negative or superposition");
      }
      double pair = c.packet.pair;
      r.number(p, "packet", "pair", pair);
      r.check(pair == 0.0 || pair == 1.0, "packet.pair", "must be 0 or 1");
      c.packet.pair = pair == 1.0 ? 1 : 0;
      std::string rep;
      r.text(p, "packet", "representation", rep);
      if (rep == "dirac") c.packet.representation = Representation::dirac;
      else r.check(rep.empty() || rep == "chiral", "packet.representation", "expected chiral or dirac");
    }
  }
  r.check(c.packet.width > 0.0, "packet.width", "must be > 0");

  if (const YAML::Node f = root["field"]) {
    r.keys(f, "field", {"type", "E", "omega", "B", "mass", "charge", "mu", "table"});
    if (f.IsMap()) {
      r.text(f, "field", "type", c.field.type);
      r.number(f, "field", "E", c.field.E);
      r.number(f, "field", "omega", c.field.omega);
      r.number(f, "field", "mass", c.field.mass);
      r.number(f, "field", "charge", c.field.charge);
      r.number(f, "field", "mu", c.field.mu);
      r.text(f, "field", "table", c.field.table);
      if (const YAML::Node b = f["B"]) {
        bool ok = b.IsSequence() && b.size() == 3;
        if (ok) {
          try {
            for (std::size_t i = 0; i < 3; ++i) c.field.B[i] = b[i].as<double>();
          } catch (const YAML::Exception&) {
            ok = false;
          }
        }
        r.check(ok, "field.B", "expected a list of three numbers");
      }
    }
  }
  const std::string& ft = c.field.type;
  r.check(ft == "free" || ft == "uniform_e" || ft == "harmonic" || ft == "tabulated", "field.type",
          "expected free, uniform_e, harmonic or tabulated");
  r.check(c.field.mass > 0.0, "field.mass", "must be > 0");
  if (ft == "harmonic") r.check(c.field.omega > 0.0, "field.omega", "must be > 0 for a harmonic field");
  if (ft == "tabulated") r.check(!c.field.table.empty(), "field.table", "required for a tabulated field");

  if (const YAML::Node e = root["evolve"]) {
    r.keys(e, "evolve", {"steps", "record_every", "adjoint_check"});
    if (e.IsMap()) {
      r.count(e, "evolve", "steps", c.evolve.steps);
      r.count(e, "evolve", "record_every", c.evolve.record_every);
      r.flag(e, "evolve", "adjoint_check", c.evolve.adjoint_check);
    }
  }
  r.check(c.evolve.steps >= 1, "evolve.steps", "must be >= 1");
  r.check(c.evolve.record_every >= 1, "evolve.record_every", "must be >= 1");

  if (const YAML::Node n = root["noise"]) {
    r.keys(n, "noise", {"T", "lambda_c", "kappa", "rho_floor"});
    if (n.IsMap()) {
      r.number(n, "noise", "T", c.noise.T);
      r.number(n, "noise", "lambda_c", c.noise.lambda_c);
      r.number(n, "noise", "kappa", c.noise.kappa);
      r.number(n, "noise", "rho_floor", c.noise.rho_floor);
    }
  }
  r.check(c.noise.T >= 0.0, "noise.T", "must be >= 0");
  r.check(c.noise.lambda_c >= 0.0, "noise.lambda_c", "must be >= 0");
  r.check(c.noise.kappa > 0.0, "noise.kappa", "must be > 0");
  r.check(c.noise.rho_floor > 0.0 && c.noise.rho_floor < 1.0, "noise.rho_floor", "must lie in (0, 1)");

  if (const YAML::Node n = root["ensemble"]) {
    r.keys(n, "ensemble", {"realizations"});
    if (n.IsMap()) r.count(n, "ensemble", "realizations", c.ensemble.realizations);
  }
  r.check(c.ensemble.realizations >= 2, "ensemble.realizations", "must be >= 2");

  if (const YAML::Node b = root["boost"]) {
    r.keys(b, "boost", {"beta", "trajectory", "points", "t_prime"});
    if (b.IsMap()) {
      r.number(b, "boost", "beta", c.boost.beta);
      r.text(b, "boost", "trajectory", c.boost.trajectory);
      r.count(b, "boost", "points", c.boost.points);
      r.number(b, "boost", "t_prime", c.boost.t_prime);
    }
  }
  r.check(std::abs(c.boost.beta) < 1.0, "boost.beta", "must lie in (-1, 1)");
  r.check(c.boost.points == 0 || power_of_two(c.boost.points), "boost.points", "must be 0 or a power of two >= 8");

  if (const YAML::Node n = root["compare"]) {
    r.keys(n, "compare", {"velocity", "duration", "steps"});
    if (n.IsMap()) {
      r.number(n, "compare", "velocity", c.compare.velocity);
      r.number(n, "compare", "duration", c.compare.duration);
      r.count(n, "compare", "steps", c.compare.steps);
    }
  }
  r.check(std::abs(c.compare.velocity) < 1.0, "compare.velocity", "must lie in (-1, 1)");
  r.check(c.compare.duration > 0.0, "compare.duration", "must be > 0");
  r.check(c.compare.steps >= 1, "compare.steps", "must be >= 1");

  if (const YAML::Node o = root["output"]) {
    r.keys(o, "output", {"dir", "frames"});
    if (o.IsMap()) {
      r.text(o, "output", "dir", c.output.dir);
      r.flag(o, "output", "frames", c.output.frames);
    }
  }
  r.check(!c.output.dir.empty(), "output.dir", "must not be empty");

  if (c.regime == Regime::stochastic)
    r.check(c.seed.has_value(), "seed", "required for the stochastic regime");

  if (!r.errors.empty()) throw ConfigError(r.errors);
  if (c.grid.dt == 0.0) c.grid.dt = 0.1 * c.grid.dx;
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_yaml(const RunConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "regime" << YAML::Value << to_string(c.regime);
  if (c.seed) e << YAML::Key << "seed" << YAML::Value << *c.seed;

  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n" << YAML::Value << c.grid.n;
  e << YAML::Key << "dx" << YAML::Value << c.grid.dx;
  e << YAML::Key << "dt" << YAML::Value << c.grid.dt;
  e << YAML::Key << "t0" << YAML::Value << c.grid.t0;
  e << YAML::EndMap;

  e << YAML::Key << "packet" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "center" << YAML::Value << c.packet.center;
  e << YAML::Key << "width" << YAML::Value << c.packet.width;
  e << YAML::Key << "momentum" << YAML::Value << c.packet.momentum;
  e << YAML::Key << "branch" << YAML::Value
    << (c.packet.branch > 0 ? "positive" : c.packet.branch < 0 ? "negative" : "superposition");
  e << YAML::Key << "pair" << YAML::Value << c.packet.pair;
  e << YAML::Key << "representation" << YAML::Value
    << (c.packet.representation == Representation::dirac ? "dirac" : "chiral");
  e << YAML::Key << "theta" << YAML::Value << c.packet.theta;
  e << YAML::Key << "phi" << YAML::Value << c.packet.phi;
  e << YAML::EndMap;

  e << YAML::Key << "field" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "type" << YAML::Value << c.field.type;
  e << YAML::Key << "E" << YAML::Value << c.field.E;
  e << YAML::Key << "omega" << YAML::Value << c.field.omega;
  e << YAML::Key << "B" << YAML::Value << YAML::Flow << YAML::BeginSeq << c.field.B[0] << c.field.B[1]
    << c.field.B[2] << YAML::EndSeq;
  e << YAML::Key << "mass" << YAML::Value << c.field.mass;
  e << YAML::Key << "charge" << YAML::Value << c.field.charge;
  if (!std::isnan(c.field.mu)) e << YAML::Key << "mu" << YAML::Value << c.field.mu;
  if (!c.field.table.empty()) e << YAML::Key << "table" << YAML::Value << c.field.table;
  e << YAML::EndMap;

  e << YAML::Key << "evolve" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "steps" << YAML::Value << c.evolve.steps;
  e << YAML::Key << "record_every" << YAML::Value << c.evolve.record_every;
  e << YAML::Key << "adjoint_check" << YAML::Value << c.evolve.adjoint_check;
  e << YAML::EndMap;

  e << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "T" << YAML::Value << c.noise.T;
  e << YAML::Key << "lambda_c" << YAML::Value << c.noise.lambda_c;
  e << YAML::Key << "kappa" << YAML::Value << c.noise.kappa;
  e << YAML::Key << "rho_floor" << YAML::Value << c.noise.rho_floor;
  e << YAML::EndMap;

  e << YAML::Key << "ensemble" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "realizations" << YAML::Value << c.ensemble.realizations;
  e << YAML::EndMap;

  e << YAML::Key << "boost" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "beta" << YAML::Value << c.boost.beta;
  if (!c.boost.trajectory.empty()) e << YAML::Key << "trajectory" << YAML::Value << c.boost.trajectory;
  e << YAML::Key << "points" << YAML::Value << c.boost.points;
  if (!std::isnan(c.boost.t_prime)) e << YAML::Key << "t_prime" << YAML::Value << c.boost.t_prime;
  e << YAML::EndMap;

  e << YAML::Key << "compare" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "velocity" << YAML::Value << c.compare.velocity;
  e << YAML::Key << "duration" << YAML::Value << c.compare.duration;
  e << YAML::Key << "steps" << YAML::Value << c.compare.steps;
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dir" << YAML::Value << c.output.dir;
  e << YAML::Key << "frames" << YAML::Value << c.output.frames;
  e << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace qhd
