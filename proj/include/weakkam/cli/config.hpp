#pragma once

// Run configuration: TOML (canonical) or JSON, validated into RunConfig and
// re-serialized to a canonical JSON form whose FNV-1a hash names the run.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <toml.hpp>

#include "weakkam/error.hpp"
#include "weakkam/geometry.hpp"
#include "weakkam/io.hpp"
#include "weakkam/mather.hpp"
#include "weakkam/mean_cycle.hpp"
#include "weakkam/model.hpp"
#include "weakkam/sweep.hpp"

namespace weakkam::cli {

using nlohmann::json;

struct ModelSpec {
  int dimension = 1;
  Mat2 mass{};
  std::vector<TrigTerm> potential;

  LagrangianModel build() const { return LagrangianModel::separable(dimension, mass, potential); }
};

struct ReferenceSpec {
  std::string kind = "mechanical";  // mechanical | zero-section | points | csv
  std::vector<PhasePoint> points;
  std::string path;
  std::optional<double> alpha;
};

struct FlowSpec {
  PhaseState start{Vec2{0.25}, Vec2{0.0}};
  int steps = 50;
  std::vector<double> taus;  // pseudo-orbit refinement; defaults to the run taus
};

struct RunConfig {
  ModelSpec model;
  std::optional<int> N;
  HCoupling coupling;
  std::optional<double> tau;
  std::vector<double> taus;
  std::optional<double> D;
  double D_safety = 1.5;
  EpsilonRule aubry_epsilon{EpsilonRuleKind::residual};
  EpsilonRule mather_epsilon{EpsilonRuleKind::residual};
  MeanCycleMethod method = MeanCycleMethod::automatic;
  std::size_t max_edges = 100'000'000;
  Penalty penalty;
  double epsilon_pen = 0.0;
  FlowSpec flow;
  ReferenceSpec reference;
  int modulus_samples = 32;
  std::uint64_t seed = 0;
  std::string out_dir;  // not part of the hash

  double single_tau() const {
    if (tau) return *tau;
    if (!taus.empty()) return taus.front();
    throw ConfigError("config sets neither time.tau nor time.taus");
  }
  int nodes_per_axis(double t, double D_value) const { return N ? *N : coupling.nodes_per_axis(t, D_value); }
};

namespace detail {

inline json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = toml_to_json(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(toml_to_json(v));
    return out;
  }
  if (const auto* s = node.as_string()) return s->get();
  if (const auto* i = node.as_integer()) return i->get();
  if (const auto* f = node.as_floating_point()) return f->get();
  if (const auto* b = node.as_boolean()) return b->get();
  throw ConfigError("unsupported TOML value type (dates are not allowed)");
}

inline void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + " must be a table");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

inline double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

inline int integer(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ConfigError(what + " must be an integer");
  return j.get<int>();
}

inline std::vector<double> numbers(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

inline Vec2 vec(const json& j, int dim, const std::string& what) {
  if (j.is_number() && dim == 1) return Vec2{j.get<double>()};
  const auto v = numbers(j, what);
  if (static_cast<int>(v.size()) != dim) throw ConfigError(what + " must have " + std::to_string(dim) + " entries");
  return dim == 1 ? Vec2{v[0]} : Vec2{v[0], v[1]};
}

inline ModelSpec parse_model(const json& j) {
  allow_keys(j, "[model]", {"preset", "dimension", "mass", "potential", "amplitude", "shift"});
  ModelSpec m;
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    for (const char* k : {"dimension", "mass", "potential"})
      if (j.contains(k)) throw ConfigError(std::string("model.") + k + " cannot be combined with a preset");
    const double amplitude = j.contains("amplitude") ? number(j.at("amplitude"), "model.amplitude") : 1.0;
    const double shift = j.contains("shift") ? number(j.at("shift"), "model.shift") : 0.0;
    if (preset == "free") {
      m.potential = {};
    } else if (preset == "pendulum") {
      m.potential = {{amplitude, {1, 0}, -kTwoPi * shift}};
    } else if (preset == "double_well") {
      m.potential = {{amplitude, {2, 0}, -2.0 * kTwoPi * shift}};
    } else {
      throw ConfigError("unknown model preset '" + preset + "' (free, pendulum, double_well)");
    }
    m.mass = Mat2::diagonal(1.0, 1.0);
    return m;
  }
  if (j.contains("amplitude") || j.contains("shift")) throw ConfigError("model.amplitude and model.shift need a preset");
  m.dimension = j.contains("dimension") ? integer(j.at("dimension"), "model.dimension") : 1;
  if (m.dimension != 1 && m.dimension != 2) throw ConfigError("model.dimension must be 1 or 2");
  if (j.contains("mass")) {
    const json& mj = j.at("mass");
    if (mj.is_number()) {
      m.mass = Mat2::diagonal(mj.get<double>(), m.dimension == 1 ? 1.0 : mj.get<double>());
    } else {
      std::vector<double> flat;
      for (const auto& row : mj) {
        if (row.is_array())
          for (const auto& v : row) flat.push_back(number(v, "model.mass"));
        else
          flat.push_back(number(row, "model.mass"));
      }
      if (m.dimension == 1 && flat.size() == 1)
        m.mass = Mat2::diagonal(flat[0], 1.0);
      else if (m.dimension == 2 && flat.size() == 4)
        m.mass = Mat2{{flat[0], flat[1], flat[2], flat[3]}};
      else
        throw ConfigError("model.mass has the wrong number of entries");
    }
  } else {
    m.mass = Mat2::diagonal(1.0, 1.0);
  }
  if (j.contains("potential")) {
    for (const auto& t : j.at("potential")) {
      allow_keys(t, "[[model.potential]]", {"amplitude", "frequency", "phase"});
      TrigTerm term;
      term.amplitude = number(t.at("amplitude"), "potential.amplitude");
      if (t.contains("frequency")) {
        const json& f = t.at("frequency");
        if (f.is_number_integer()) {
          term.frequency = {f.get<int>(), 0};
        } else {
          std::vector<int> k;
          for (const auto& v : f) k.push_back(integer(v, "potential.frequency"));
          if (static_cast<int>(k.size()) != m.dimension) throw ConfigError("potential.frequency has the wrong length");
          term.frequency = {k[0], m.dimension == 2 ? k[1] : 0};
        }
      }
      term.phase = t.contains("phase") ? number(t.at("phase"), "potential.phase") : 0.0;
      m.potential.push_back(term);
    }
  }
  m.build();  // validates mass and terms
  return m;
}

inline EpsilonRule parse_epsilon(const json& j, const std::string& what) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!(v >= 0.0)) throw ConfigError(what + " must be nonnegative");
    return {EpsilonRuleKind::fixed, v};
  }
  const std::string s = j.get<std::string>();
  if (s == "residual") return {EpsilonRuleKind::residual, 0.0};
  if (s == "spatial") return {EpsilonRuleKind::spatial, 0.0};
  throw ConfigError(what + " must be a number, \"residual\" or \"spatial\"");
}

inline json epsilon_json(const EpsilonRule& e) {
  if (e.kind == EpsilonRuleKind::fixed) return e.value;
  return to_string(e.kind);
}

inline MeanCycleMethod parse_method(const std::string& s) {
  if (s == "karp") return MeanCycleMethod::karp;
  if (s == "howard") return MeanCycleMethod::howard;
  if (s == "automatic") return MeanCycleMethod::automatic;
  throw ConfigError("solver.method must be karp, howard or automatic");
}

inline std::vector<PhasePoint> parse_points(const json& j, int dim) {
  std::vector<PhasePoint> out;
  for (const auto& row : j) {
    const auto v = numbers(row, "reference.points");
    if (static_cast<int>(v.size()) != 2 * dim) throw ConfigError("reference point has the wrong arity");
    out.push_back(dim == 1 ? PhasePoint{Vec2{v[0]}, Vec2{v[1]}} : PhasePoint{Vec2{v[0], v[1]}, Vec2{v[2], v[3]}});
  }
  return out;
}

}  // namespace detail

inline RunConfig parse_config(const json& root) {
  using namespace detail;
  allow_keys(root, "config", {"model", "grid", "time", "bound", "epsilon", "solver", "penalty", "flow",
                              "reference", "aubry", "output"});
  RunConfig c;
  if (!root.contains("model")) throw ConfigError("config needs a [model] table");
  c.model = parse_model(root.at("model"));
  const int dim = c.model.dimension;

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    allow_keys(g, "[grid]", {"N", "c_h"});
    if (g.contains("N")) {
      c.N = integer(g.at("N"), "grid.N");
      if (*c.N < 2) throw ConfigError("grid.N must be at least 2");
    }
    if (g.contains("c_h")) {
      if (c.N) throw ConfigError("grid.N and grid.c_h are exclusive");
      c.coupling.c_h = number(g.at("c_h"), "grid.c_h");
      if (!(c.coupling.c_h > 0.0)) throw ConfigError("grid.c_h must be positive");
    }
  }
  if (root.contains("time")) {
    const json& t = root.at("time");
    allow_keys(t, "[time]", {"tau", "taus"});
    if (t.contains("tau")) c.tau = number(t.at("tau"), "time.tau");
    if (t.contains("taus")) c.taus = numbers(t.at("taus"), "time.taus");
  }
  if (c.tau && !(*c.tau > 0.0)) throw ConfigError("time.tau must be positive");
  for (double t : c.taus)
    if (!(t > 0.0)) throw ConfigError("time.taus must be positive");
  if (!c.tau && c.taus.empty()) throw ConfigError("config needs time.tau or time.taus");

  if (root.contains("bound")) {
    const json& b = root.at("bound");
    allow_keys(b, "[bound]", {"D", "safety"});
    if (b.contains("D")) {
      c.D = number(b.at("D"), "bound.D");
      if (!(*c.D > 0.0)) throw ConfigError("bound.D must be positive");
    }
    if (b.contains("safety")) c.D_safety = number(b.at("safety"), "bound.safety");
    if (!(c.D_safety > 0.0)) throw ConfigError("bound.safety must be positive");
  }
  if (root.contains("epsilon")) {
    const json& e = root.at("epsilon");
    allow_keys(e, "[epsilon]", {"aubry", "mather"});
    if (e.contains("aubry")) c.aubry_epsilon = parse_epsilon(e.at("aubry"), "epsilon.aubry");
    if (e.contains("mather")) c.mather_epsilon = parse_epsilon(e.at("mather"), "epsilon.mather");
  }
  if (root.contains("solver")) {
    const json& s = root.at("solver");
    allow_keys(s, "[solver]", {"method", "max_edges"});
    if (s.contains("method")) c.method = parse_method(s.at("method").get<std::string>());
    if (s.contains("max_edges")) {
      const double m = number(s.at("max_edges"), "solver.max_edges");
      if (!(m >= 1.0)) throw ConfigError("solver.max_edges must be positive");
      c.max_edges = static_cast<std::size_t>(m);
    }
  }
  if (root.contains("penalty")) {
    const json& p = root.at("penalty");
    allow_keys(p, "[penalty]", {"kind", "center", "radius", "amplitude", "frequency", "phase", "epsilon"});
    const std::string kind = p.contains("kind") ? p.at("kind").get<std::string>() : "bump";
    if (kind == "bump")
      c.penalty.kind = PenaltyKind::bump;
    else if (kind == "constant")
      c.penalty.kind = PenaltyKind::constant;
    else if (kind == "trig")
      c.penalty.kind = PenaltyKind::trig;
    else
      throw ConfigError("penalty.kind must be bump, constant or trig");
    if (p.contains("center")) c.penalty.center = vec(p.at("center"), dim, "penalty.center");
    if (p.contains("radius")) c.penalty.radius = number(p.at("radius"), "penalty.radius");
    if (!(c.penalty.radius > 0.0)) throw ConfigError("penalty.radius must be positive");
    if (p.contains("amplitude")) c.penalty.amplitude = number(p.at("amplitude"), "penalty.amplitude");
    if (p.contains("frequency")) {
      const Vec2 f = vec(p.at("frequency"), dim, "penalty.frequency");
      c.penalty.frequency = {static_cast<int>(f[0]), static_cast<int>(f[1])};
    }
    if (p.contains("phase")) c.penalty.phase = number(p.at("phase"), "penalty.phase");
    if (p.contains("epsilon")) c.epsilon_pen = number(p.at("epsilon"), "penalty.epsilon");
    if (!(c.epsilon_pen >= 0.0)) throw ConfigError("penalty.epsilon must be nonnegative");
  }
  if (root.contains("flow")) {
    const json& f = root.at("flow");
    allow_keys(f, "[flow]", {"x", "v", "steps", "taus"});
    if (f.contains("x")) c.flow.start.x = vec(f.at("x"), dim, "flow.x");
    if (f.contains("v")) c.flow.start.v = vec(f.at("v"), dim, "flow.v");
    if (dim == 2 && !f.contains("x")) c.flow.start.x = Vec2{0.25, 0.25};
    if (f.contains("steps")) c.flow.steps = integer(f.at("steps"), "flow.steps");
    if (c.flow.steps < 1) throw ConfigError("flow.steps must be at least 1");
    if (f.contains("taus")) c.flow.taus = numbers(f.at("taus"), "flow.taus");
  }
  if (root.contains("reference")) {
    const json& r = root.at("reference");
    allow_keys(r, "[reference]", {"kind", "points", "path", "alpha"});
    if (r.contains("kind")) c.reference.kind = r.at("kind").get<std::string>();
    if (r.contains("points")) c.reference.points = parse_points(r.at("points"), dim);
    if (r.contains("path")) c.reference.path = r.at("path").get<std::string>();
    if (r.contains("alpha")) c.reference.alpha = number(r.at("alpha"), "reference.alpha");
    const std::string& k = c.reference.kind;
    if (k != "mechanical" && k != "zero-section" && k != "points" && k != "csv")
      throw ConfigError("reference.kind must be mechanical, zero-section, points or csv");
    if (k == "points" && c.reference.points.empty()) throw ConfigError("reference.points is empty");
    if (k == "csv" && c.reference.path.empty()) throw ConfigError("reference.path is required for csv");
  }
  if (root.contains("aubry")) {
    const json& a = root.at("aubry");
    allow_keys(a, "[aubry]", {"modulus_samples"});
    if (a.contains("modulus_samples")) c.modulus_samples = integer(a.at("modulus_samples"), "aubry.modulus_samples");
    if (c.modulus_samples < 0) throw ConfigError("aubry.modulus_samples must be nonnegative");
  }
  if (root.contains("output")) {
    const json& o = root.at("output");
    allow_keys(o, "[output]", {"dir", "seed"});
    if (o.contains("dir")) c.out_dir = o.at("dir").get<std::string>();
    if (o.contains("seed")) c.seed = static_cast<std::uint64_t>(integer(o.at("seed"), "output.seed"));
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json root;
  if (path.extension() == ".json") {
    try {
      root = json::parse(ss.str());
    } catch (const json::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  } else {
    try {
      root = detail::toml_to_json(toml::parse(ss.str(), path.string()));
    } catch (const toml::parse_error& e) {
      std::ostringstream msg;
      msg << path.string() << ": " << e.description() << " (line " << e.source().begin.line << ")";
      throw ConfigError(msg.str());
    }
  }
  try {
    return parse_config(root);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
}

/// Normalized configuration; identical configs produce identical text.
inline json canonical_json(const RunConfig& c) {
  json terms = json::array();
  for (const auto& t : c.model.potential)
    terms.push_back({{"amplitude", t.amplitude}, {"frequency", {t.frequency[0], t.frequency[1]}}, {"phase", t.phase}});
  json j;
  j["model"] = {{"dimension", c.model.dimension},
                {"mass", {c.model.mass.a[0], c.model.mass.a[1], c.model.mass.a[2], c.model.mass.a[3]}},
                {"potential", terms}};
  j["grid"] = c.N ? json{{"N", *c.N}} : json{{"c_h", c.coupling.c_h}};
  j["time"] = {{"tau", c.tau ? json(*c.tau) : json(nullptr)}, {"taus", c.taus}};
  j["bound"] = {{"D", c.D ? json(*c.D) : json(nullptr)}, {"safety", c.D_safety}};
  j["epsilon"] = {{"aubry", detail::epsilon_json(c.aubry_epsilon)}, {"mather", detail::epsilon_json(c.mather_epsilon)}};
  j["solver"] = {{"method", to_string(c.method)}, {"max_edges", c.max_edges}};
  const char* pk = c.penalty.kind == PenaltyKind::bump ? "bump" : c.penalty.kind == PenaltyKind::constant ? "constant" : "trig";
  j["penalty"] = {{"kind", pk},
                  {"center", {c.penalty.center[0], c.penalty.center[1]}},
                  {"radius", c.penalty.radius},
                  {"amplitude", c.penalty.amplitude},
                  {"frequency", {c.penalty.frequency[0], c.penalty.frequency[1]}},
                  {"phase", c.penalty.phase},
                  {"epsilon", c.epsilon_pen}};
  j["flow"] = {{"x", {c.flow.start.x[0], c.flow.start.x[1]}},
               {"v", {c.flow.start.v[0], c.flow.start.v[1]}},
               {"steps", c.flow.steps},
               {"taus", c.flow.taus}};
  json pts = json::array();
  for (const auto& p : c.reference.points) pts.push_back({p.x[0], p.x[1], p.v[0], p.v[1]});
  j["reference"] = {{"kind", c.reference.kind},
                    {"points", pts},
                    {"path", c.reference.path},
                    {"alpha", c.reference.alpha ? json(*c.reference.alpha) : json(nullptr)}};
  j["aubry"] = {{"modulus_samples", c.modulus_samples}};
  j["seed"] = c.seed;
  return j;
}

inline std::string config_hash(const RunConfig& c) { return io::hex(io::fnv1a(canonical_json(c).dump())); }

}  // namespace weakkam::cli
