#include "stefan/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace stefan {

namespace {

std::string join(const std::vector<std::string>& errors) {
  std::string out;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (i) out += "; ";
    out += errors[i];
  }
  return out;
}

std::string at(const YAML::Node& node) {
  const auto mark = node.Mark();
  if (mark.is_null()) return "";
  return " (line " + std::to_string(mark.line + 1) + ", column " + std::to_string(mark.column + 1) + ")";
}

class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const YAML::Node& node, const std::string& msg) {
    errors.push_back(path + ": " + msg + at(node));
  }

  // Returns false (and records an error) when `node` is not a map.
  bool map(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) {
    if (!node.IsMap()) {
      fail(path, node, "expected a mapping");
      return false;
    }
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(path + "." + key, kv.first, "unknown key");
    }
    return true;
  }

  std::optional<double> real(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) {
      fail(path, node, "expected a number");
      return std::nullopt;
    }
    const auto text = node.Scalar();
    double x = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr != last) {
      fail(path, node, "'" + text + "' is not a number");
      return std::nullopt;
    }
    if (!std::isfinite(x)) {
      fail(path, node, "must be finite");
      return std::nullopt;
    }
    return x;
  }

  std::optional<long long> integer(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) {
      fail(path, node, "expected an integer");
      return std::nullopt;
    }
    const auto text = node.Scalar();
    long long x = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      fail(path, node, "'" + text + "' is not an integer");
      return std::nullopt;
    }
    return x;
  }

  void get(const YAML::Node& parent, const std::string& path, const char* key, double& out) {
    if (const auto n = parent[key]) {
      if (auto v = real(n, path + "." + key)) out = *v;
    }
  }
  void get(const YAML::Node& parent, const std::string& path, const char* key, std::optional<double>& out) {
    if (const auto n = parent[key]) out = real(n, path + "." + key);
  }
  template <class Int>
  void get_int(const YAML::Node& parent, const std::string& path, const char* key, Int& out) {
    if (const auto n = parent[key]) {
      if (auto v = integer(n, path + "." + key)) out = static_cast<Int>(*v);
    }
  }

  void require(const YAML::Node& parent, const std::string& path, const char* key) {
    if (!parent[key]) fail(path + "." + key, parent, "required key is missing");
  }

  std::vector<double> reals(const YAML::Node& node, const std::string& path) {
    std::vector<double> out;
    if (!node.IsSequence()) {
      fail(path, node, "expected a list of numbers");
      return out;
    }
    for (std::size_t i = 0; i < node.size(); ++i) {
      if (auto v = real(node[i], path + "[" + std::to_string(i) + "]")) out.push_back(*v);
    }
    return out;
  }

  void positive(double x, const std::string& path, const YAML::Node& node) {
    if (!(x > 0.0)) fail(path, node, "must be positive");
  }
  void at_least(long long x, long long lo, const std::string& path, const YAML::Node& node) {
    if (x < lo) fail(path, node, "must be >= " + std::to_string(lo));
  }
};

EnergyFamily family_from(const std::string& s, bool& ok) {
  ok = true;
  if (s == "EqualHeatCapacity") return EnergyFamily::EqualHeatCapacity;
  if (s == "LinearInternalEnergy") return EnergyFamily::LinearInternalEnergy;
  ok = false;
  return EnergyFamily::Custom;
}

void read_material(Reader& r, const YAML::Node& node, MaterialSection& m) {
  const std::string p = "material";
  if (!r.map(node, p, {"family", "a1", "b1", "a2", "b2", "kappa", "kappa1", "kappa2", "d1", "d2", "gamma",
                       "u_lo", "u_hi"})) {
    return;
  }
  r.require(node, p, "family");
  if (const auto f = node["family"]) {
    bool ok = false;
    m.family = family_from(f.Scalar(), ok);
    if (!ok) {
      r.fail(p + ".family", f,
             "'" + f.Scalar() + "' is not supported in config files (EqualHeatCapacity or LinearInternalEnergy)");
      return;
    }
  }
  for (const char* k : {"a1", "b1", "a2", "b2"}) r.require(node, p, k);
  r.get(node, p, "a1", m.a1);
  r.get(node, p, "b1", m.b1);
  r.get(node, p, "a2", m.a2);
  r.get(node, p, "b2", m.b2);
  if (m.family == EnergyFamily::EqualHeatCapacity) {
    if (node["kappa1"] || node["kappa2"]) {
      r.fail(p, node, "EqualHeatCapacity takes a single 'kappa', not kappa1/kappa2");
    }
    r.require(node, p, "kappa");
    r.get(node, p, "kappa", m.kappa1);
    m.kappa2 = m.kappa1;
  } else {
    if (node["kappa"]) r.fail(p + ".kappa", node["kappa"], "LinearInternalEnergy takes kappa1 and kappa2");
    r.require(node, p, "kappa1");
    r.require(node, p, "kappa2");
    r.get(node, p, "kappa1", m.kappa1);
    r.get(node, p, "kappa2", m.kappa2);
  }
  r.get(node, p, "d1", m.d1);
  r.get(node, p, "d2", m.d2);
  r.get(node, p, "gamma", m.gamma);
  if (m.gamma < 0.0) {
    r.fail(p + ".gamma", node["gamma"],
           "the undercooling coefficient must satisfy gamma >= 0 (either gamma = 0 or gamma > 0 throughout)");
  }
  r.get(node, p, "u_lo", m.u_lo);
  r.get(node, p, "u_hi", m.u_hi);
  if (!(m.u_lo > 0.0) || !(m.u_hi > m.u_lo)) {
    r.fail(p, node, "the admissible interval needs 0 < u_lo < u_hi");
  }
}

void read_domain(Reader& r, const YAML::Node& node, DomainSpec& d) {
  const std::string p = "domain";
  if (!r.map(node, p, {"n", "volume", "packing_radii"})) return;
  r.require(node, p, "n");
  r.require(node, p, "volume");
  r.get_int(node, p, "n", d.n);
  if (d.n != 2 && d.n != 3) r.fail(p + ".n", node["n"] ? node["n"] : node, "must be 2 or 3");
  r.get(node, p, "volume", d.volume);
  r.positive(d.volume, p + ".volume", node["volume"] ? node["volume"] : node);
  if (const auto pr = node["packing_radii"]) {
    d.packing_radii = r.reals(pr, p + ".packing_radii");
    try {
      d.validate();
    } catch (const Error& e) {
      r.fail(p + ".packing_radii", pr, e.what());
    }
  }
}

void read_problem(Reader& r, const YAML::Node& node, ProblemSection& pr) {
  const std::string p = "problem";
  if (!r.map(node, p, {"sigma", "spheres", "energy", "temperature"})) return;
  r.require(node, p, "sigma");
  r.get(node, p, "sigma", pr.sigma);
  if (node["sigma"]) r.positive(pr.sigma, p + ".sigma", node["sigma"]);
  r.get_int(node, p, "spheres", pr.spheres);
  r.at_least(pr.spheres, 1, p + ".spheres", node["spheres"] ? node["spheres"] : node);
  r.get(node, p, "energy", pr.energy);
  r.get(node, p, "temperature", pr.temperature);
  if (node["energy"] && node["temperature"]) r.fail(p, node, "give either energy or temperature, not both");
}

void read_equilibria(Reader& r, const YAML::Node& node, EquilibriaTask& t) {
  const std::string p = "equilibria";
  if (node.IsNull()) return;
  if (!r.map(node, p, {"samples"})) return;
  r.get_int(node, p, "samples", t.samples);
  r.at_least(t.samples, 2, p + ".samples", node);
}

void read_spectrum(Reader& r, const YAML::Node& node, SpectrumTask& t) {
  const std::string p = "spectrum";
  if (!r.map(node, p, {"temperature", "concentric", "multidisc"})) return;
  r.require(node, p, "temperature");
  r.get(node, p, "temperature", t.temperature);
  if (const auto c = node["concentric"]) {
    const std::string q = p + ".concentric";
    ConcentricSpectrum s;
    if (c.IsNull() || r.map(c, q, {"max_mode", "lambda_min", "lambda_max", "points_per_decade", "radial_nodes"})) {
      if (!c.IsNull()) {
        r.get_int(c, q, "max_mode", s.max_mode);
        r.get(c, q, "lambda_min", s.lambda_min);
        r.get(c, q, "lambda_max", s.lambda_max);
        r.get_int(c, q, "points_per_decade", s.points_per_decade);
        r.get_int(c, q, "radial_nodes", s.radial_nodes);
      }
      r.at_least(s.max_mode, 1, q + ".max_mode", c);
      r.positive(s.lambda_min, q + ".lambda_min", c);
      if (s.lambda_max < 0.0) r.fail(q + ".lambda_max", c, "must be >= 0 (0 selects the window automatically)");
      r.at_least(s.points_per_decade, 8, q + ".points_per_decade", c);
      r.at_least(s.radial_nodes, 2000, q + ".radial_nodes", c);
    }
    t.concentric = s;
  }
  if (const auto c = node["multidisc"]) {
    const std::string q = p + ".multidisc";
    MultiDiscSpectrum s;
    if (r.map(c, q, {"width", "height", "centers", "grid", "quadrature", "subsample", "lambda_min", "lambda_max",
                     "points_per_decade"})) {
      r.get(c, q, "width", s.width);
      r.get(c, q, "height", s.height);
      r.require(c, q, "centers");
      if (const auto cs = c["centers"]) {
        if (!cs.IsSequence() || cs.size() == 0) {
          r.fail(q + ".centers", cs, "expected a non-empty list of [x, y] pairs");
        } else {
          for (std::size_t i = 0; i < cs.size(); ++i) {
            const auto xy = r.reals(cs[i], q + ".centers[" + std::to_string(i) + "]");
            if (xy.size() != 2) {
              r.fail(q + ".centers[" + std::to_string(i) + "]", cs[i], "expected [x, y]");
            } else {
              s.centers.push_back({xy[0], xy[1]});
            }
          }
        }
      }
      r.get_int(c, q, "grid", s.grid);
      r.get_int(c, q, "quadrature", s.quadrature);
      r.get_int(c, q, "subsample", s.subsample);
      r.get(c, q, "lambda_min", s.lambda_min);
      r.get(c, q, "lambda_max", s.lambda_max);
      r.get_int(c, q, "points_per_decade", s.points_per_decade);
      r.positive(s.width, q + ".width", c);
      r.positive(s.height, q + ".height", c);
      r.at_least(s.grid, 16, q + ".grid", c);
      r.at_least(s.quadrature, 8, q + ".quadrature", c);
      r.at_least(s.subsample, 1, q + ".subsample", c);
      r.positive(s.lambda_min, q + ".lambda_min", c);
      r.at_least(s.points_per_decade, 2, q + ".points_per_decade", c);
    }
    t.multidisc = s;
  }
  if (!node["concentric"] && !node["multidisc"]) {
    r.fail(p, node, "needs a 'concentric' or 'multidisc' section");
  }
}

void read_simulate(Reader& r, const YAML::Node& node, SimulateTask& t) {
  const std::string p = "simulate";
  if (!r.map(node, p, {"s0", "u_bulk", "energy", "jitter", "bump_width", "inner_cells", "outer_cells", "cfl",
                       "dt_min", "dt_max", "dt_initial", "t_end", "max_steps", "bound", "record_every"})) {
    return;
  }
  r.require(node, p, "s0");
  r.require(node, p, "t_end");
  r.get(node, p, "s0", t.s0);
  r.get(node, p, "u_bulk", t.u_bulk);
  r.get(node, p, "energy", t.energy);
  r.get(node, p, "jitter", t.jitter);
  r.get(node, p, "bump_width", t.bump_width);
  r.get_int(node, p, "inner_cells", t.inner_cells);
  r.get_int(node, p, "outer_cells", t.outer_cells);
  r.get(node, p, "cfl", t.cfl);
  r.get(node, p, "dt_min", t.dt_min);
  r.get(node, p, "dt_max", t.dt_max);
  r.get(node, p, "dt_initial", t.dt_initial);
  r.get(node, p, "t_end", t.t_end);
  r.get_int(node, p, "max_steps", t.max_steps);
  r.get(node, p, "bound", t.bound);
  r.get_int(node, p, "record_every", t.record_every);
  r.positive(t.s0, p + ".s0", node);
  r.positive(t.u_bulk, p + ".u_bulk", node);
  if (!(t.jitter >= 0.0 && t.jitter < 1.0)) r.fail(p + ".jitter", node, "must lie in [0, 1)");
  r.positive(t.bump_width, p + ".bump_width", node);
  r.at_least(t.inner_cells, 4, p + ".inner_cells", node);
  r.at_least(t.outer_cells, 4, p + ".outer_cells", node);
  r.positive(t.cfl, p + ".cfl", node);
  r.positive(t.dt_min, p + ".dt_min", node);
  if (!(t.dt_max >= t.dt_min)) r.fail(p + ".dt_max", node, "must be >= dt_min");
  r.positive(t.dt_initial, p + ".dt_initial", node);
  r.positive(t.t_end, p + ".t_end", node);
  r.at_least(t.max_steps, 1, p + ".max_steps", node);
  if (!(t.bound > 1.0)) r.fail(p + ".bound", node, "must exceed 1");
  r.at_least(t.record_every, 1, p + ".record_every", node);
}

void read_ripening(Reader& r, const YAML::Node& node, RipeningTask& t) {
  const std::string p = "ripening";
  if (!r.map(node, p, {"radii", "jitter", "temperature", "energy", "dt", "t_end", "collapse_radius",
                       "record_every"})) {
    return;
  }
  r.require(node, p, "radii");
  r.require(node, p, "t_end");
  if (const auto rs = node["radii"]) {
    t.radii = r.reals(rs, p + ".radii");
    if (t.radii.empty()) r.fail(p + ".radii", rs, "needs at least one radius");
    for (double x : t.radii) {
      if (!(x > 0.0)) r.fail(p + ".radii", rs, "radii must be positive");
    }
  }
  r.get(node, p, "jitter", t.jitter);
  r.get(node, p, "temperature", t.temperature);
  r.get(node, p, "energy", t.energy);
  r.get(node, p, "dt", t.dt);
  r.get(node, p, "t_end", t.t_end);
  r.get(node, p, "collapse_radius", t.collapse_radius);
  r.get_int(node, p, "record_every", t.record_every);
  if (!(t.jitter >= 0.0 && t.jitter < 1.0)) r.fail(p + ".jitter", node, "must lie in [0, 1)");
  r.positive(t.temperature, p + ".temperature", node);
  r.positive(t.dt, p + ".dt", node);
  r.positive(t.t_end, p + ".t_end", node);
  r.positive(t.collapse_radius, p + ".collapse_radius", node);
  r.at_least(t.record_every, 1, p + ".record_every", node);
}

const std::set<std::string>& known_suites() {
  static const std::set<std::string> s{"thermo", "equilibria", "geometry", "spectral", "simulate", "ripening"};
  return s;
}

void read_check(Reader& r, const YAML::Node& node, CheckTask& t) {
  const std::string p = "check";
  if (node.IsNull()) return;
  if (!r.map(node, p, {"suites"})) return;
  if (const auto s = node["suites"]) {
    if (!s.IsSequence()) {
      r.fail(p + ".suites", s, "expected a list");
      return;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto name = s[i].Scalar();
      if (!known_suites().count(name)) {
        r.fail(p + ".suites[" + std::to_string(i) + "]", s[i], "unknown suite '" + name + "'");
      } else {
        t.suites.push_back(name);
      }
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : Error(ErrorCode::Config, join(errors)), errors_(std::move(errors)) {}

FreeEnergyModel MaterialSection::build() const {
  auto m = family == EnergyFamily::EqualHeatCapacity
               ? FreeEnergyModel::equal_heat_capacity(a1, b1, a2, b2, kappa1)
               : FreeEnergyModel::linear_internal_energy(a1, b1, kappa1, a2, b2, kappa2);
  m.with_conductivity(d1, d2).with_undercooling(gamma).with_interval(u_lo, u_hi);
  return m;
}

double RunConfig::outer_radius() const {
  return std::pow(domain.volume * domain.n / domain.omega(), 1.0 / domain.n);
}

EquilibriumProblem RunConfig::equilibrium_problem() const {
  EquilibriumProblem p{material.build(), domain, problem.sigma, problem.spheres, 0.0};
  if (problem.energy) {
    p.energy = *problem.energy;
  } else if (problem.temperature) {
    ReducedEnergy phi(p.model, p.domain, p.sigma, p.m);
    p.energy = phi.phi(*problem.temperature);
  } else {
    throw ConfigError({"problem: energy or temperature is required for this task"});
  }
  return p;
}

RunConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    std::ostringstream os;
    os << "YAML syntax error at line " << e.mark.line + 1 << ", column " << e.mark.column + 1 << ": " << e.msg;
    throw ConfigError({os.str()});
  }
  Reader r;
  RunConfig cfg;
  if (!root.IsMap()) throw ConfigError({"config: expected a mapping at the top level"});
  r.map(root, "config", {"material", "domain", "problem", "equilibria", "spectrum", "simulate", "ripening", "check",
                         "output", "seed"});
  for (const char* k : {"material", "domain", "problem"}) r.require(root, "config", k);
  if (const auto n = root["material"]) read_material(r, n, cfg.material);
  if (const auto n = root["domain"]) read_domain(r, n, cfg.domain);
  if (const auto n = root["problem"]) read_problem(r, n, cfg.problem);
  if (const auto n = root["equilibria"]) read_equilibria(r, n, cfg.equilibria.emplace());
  if (const auto n = root["spectrum"]) read_spectrum(r, n, cfg.spectrum.emplace());
  if (const auto n = root["simulate"]) read_simulate(r, n, cfg.simulate.emplace());
  if (const auto n = root["ripening"]) read_ripening(r, n, cfg.ripening.emplace());
  if (const auto n = root["check"]) read_check(r, n, cfg.check.emplace());
  if (const auto n = root["output"]) {
    if (r.map(n, "output", {"dir"}) && n["dir"]) {
      if (n["dir"].IsScalar() && !n["dir"].Scalar().empty()) {
        cfg.output_dir = n["dir"].Scalar();
      } else {
        r.fail("output.dir", n["dir"], "expected a path");
      }
    }
  }
  if (const auto n = root["seed"]) {
    if (auto v = r.integer(n, "seed")) {
      if (*v < 0) {
        r.fail("seed", n, "must be non-negative");
      } else {
        cfg.seed = static_cast<std::uint64_t>(*v);
      }
    }
  }
  if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

class Emitter {
 public:
  void section(const char* name) {
    out_ << name << ":\n";
  }
  void key(int indent, const char* k, const std::string& v) {
    out_ << std::string(2 * indent, ' ') << k << ": " << v << "\n";
  }
  void num(int indent, const char* k, double v) { key(indent, k, format_number(v)); }
  void integer(int indent, const char* k, long long v) { key(indent, k, std::to_string(v)); }
  static std::string list(const std::vector<double>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_number(xs[i]);
    return s + "]";
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

}  // namespace

std::string serialize(const RunConfig& cfg) {
  Emitter e;
  const auto& m = cfg.material;
  e.section("material");
  e.key(1, "family", m.family == EnergyFamily::EqualHeatCapacity ? "EqualHeatCapacity" : "LinearInternalEnergy");
  e.num(1, "a1", m.a1);
  e.num(1, "b1", m.b1);
  e.num(1, "a2", m.a2);
  e.num(1, "b2", m.b2);
  if (m.family == EnergyFamily::EqualHeatCapacity) {
    e.num(1, "kappa", m.kappa1);
  } else {
    e.num(1, "kappa1", m.kappa1);
    e.num(1, "kappa2", m.kappa2);
  }
  e.num(1, "d1", m.d1);
  e.num(1, "d2", m.d2);
  e.num(1, "gamma", m.gamma);
  e.num(1, "u_lo", m.u_lo);
  e.num(1, "u_hi", m.u_hi);

  e.section("domain");
  e.integer(1, "n", cfg.domain.n);
  e.num(1, "volume", cfg.domain.volume);
  if (!cfg.domain.packing_radii.empty()) e.key(1, "packing_radii", Emitter::list(cfg.domain.packing_radii));

  e.section("problem");
  e.num(1, "sigma", cfg.problem.sigma);
  e.integer(1, "spheres", cfg.problem.spheres);
  if (cfg.problem.energy) e.num(1, "energy", *cfg.problem.energy);
  if (cfg.problem.temperature) e.num(1, "temperature", *cfg.problem.temperature);

  if (cfg.equilibria) {
    e.section("equilibria");
    e.integer(1, "samples", cfg.equilibria->samples);
  }
  if (cfg.spectrum) {
    const auto& s = *cfg.spectrum;
    e.section("spectrum");
    e.num(1, "temperature", s.temperature);
    if (s.concentric) {
      const auto& c = *s.concentric;
      e.key(1, "concentric", "");
      e.integer(2, "max_mode", c.max_mode);
      e.num(2, "lambda_min", c.lambda_min);
      e.num(2, "lambda_max", c.lambda_max);
      e.integer(2, "points_per_decade", c.points_per_decade);
      e.integer(2, "radial_nodes", c.radial_nodes);
    }
    if (s.multidisc) {
      const auto& c = *s.multidisc;
      e.key(1, "multidisc", "");
      e.num(2, "width", c.width);
      e.num(2, "height", c.height);
      std::string centers = "[";
      for (std::size_t i = 0; i < c.centers.size(); ++i) {
        centers += (i ? ", " : "") + Emitter::list({c.centers[i][0], c.centers[i][1]});
      }
      e.key(2, "centers", centers + "]");
      e.integer(2, "grid", c.grid);
      e.integer(2, "quadrature", c.quadrature);
      e.integer(2, "subsample", c.subsample);
      e.num(2, "lambda_min", c.lambda_min);
      e.num(2, "lambda_max", c.lambda_max);
      e.integer(2, "points_per_decade", c.points_per_decade);
    }
  }
  if (cfg.simulate) {
    const auto& s = *cfg.simulate;
    e.section("simulate");
    e.num(1, "s0", s.s0);
    e.num(1, "u_bulk", s.u_bulk);
    if (s.energy) e.num(1, "energy", *s.energy);
    e.num(1, "jitter", s.jitter);
    e.num(1, "bump_width", s.bump_width);
    e.integer(1, "inner_cells", s.inner_cells);
    e.integer(1, "outer_cells", s.outer_cells);
    e.num(1, "cfl", s.cfl);
    e.num(1, "dt_min", s.dt_min);
    e.num(1, "dt_max", s.dt_max);
    e.num(1, "dt_initial", s.dt_initial);
    e.num(1, "t_end", s.t_end);
    e.integer(1, "max_steps", s.max_steps);
    e.num(1, "bound", s.bound);
    e.integer(1, "record_every", s.record_every);
  }
  if (cfg.ripening) {
    const auto& s = *cfg.ripening;
    e.section("ripening");
    e.key(1, "radii", Emitter::list(s.radii));
    e.num(1, "jitter", s.jitter);
    e.num(1, "temperature", s.temperature);
    if (s.energy) e.num(1, "energy", *s.energy);
    e.num(1, "dt", s.dt);
    e.num(1, "t_end", s.t_end);
    e.num(1, "collapse_radius", s.collapse_radius);
    e.integer(1, "record_every", s.record_every);
  }
  if (cfg.check) {
    e.section("check");
    std::string suites = "[";
    for (std::size_t i = 0; i < cfg.check->suites.size(); ++i) suites += (i ? ", " : "") + cfg.check->suites[i];
    e.key(1, "suites", suites + "]");
  }
  e.section("output");
  e.key(1, "dir", cfg.output_dir);
  e.integer(0, "seed", static_cast<long long>(cfg.seed));
  std::string out = e.str();
  // "key: \n" for nested sections reads better without the trailing space.
  std::string::size_type pos = 0;
  while ((pos = out.find(": \n", pos)) != std::string::npos) out.replace(pos, 3, ":\n");
  return out;
}

}  // namespace stefan
