#include "hnls/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hnls {

namespace {

using nlohmann::json;

// Walks one JSON object, remembers which keys were read, and rejects the rest.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return as<T>(key);
  }

  template <class T>
  T require(const std::string& key) {
    if (!has(key)) fail(key, "missing required key");
    return as<T>(key);
  }

  Reader child(const std::string& key) {
    seen_.insert(key);
    return Reader(j_.at(key), where(key));
  }

  // per-axis values may be a scalar (applied to all axes) or an array
  template <class T>
  std::array<T, 2> pair(const std::string& key, std::array<T, 2> fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (v.is_array()) {
      if (v.empty() || v.size() > 2) fail(key, "expected one or two entries");
      std::array<T, 2> out{};
      for (std::size_t i = 0; i < 2; ++i) out[i] = convert<T>(v[std::min<std::size_t>(i, v.size() - 1)], key);
      return out;
    }
    const T s = convert<T>(v, key);
    return {s, s};
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail(key, "unknown key");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(where(key) + ": " + msg);
  }

  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  template <class T>
  T as(const std::string& key) {
    return convert<T>(raw(key), key);
  }

  template <class T>
  T convert(const json& v, const std::string& key) const {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(key, "expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(key, "expected a string");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(key, "expected a number");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(key, "expected an integer");
    } else {
      if (!v.is_array()) fail(key, "expected an array");
      for (const auto& e : v) {
        if (!e.is_number()) fail(key, "expected an array of numbers");
      }
    }
    return v.get<T>();
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
auto guarded(Reader& r, const std::string& key, F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    r.fail(key, e.what());
  }
}

GridSpec read_grid(Reader r) {
  GridSpec g;
  g.dims = r.get<int>("dims", 1);
  if (g.dims != 1 && g.dims != 2) r.fail("dims", "must be 1 or 2");
  const auto n = r.pair<std::size_t>("n", {256, 256});
  const auto len = r.pair<double>("length", {48.0, 48.0});
  g.n.assign(n.begin(), n.begin() + g.dims);
  g.length.assign(len.begin(), len.begin() + g.dims);
  r.finish();
  guarded(r, "", [&] { return g.make(); });
  return g;
}

StateSpec read_state(Reader r) {
  StateSpec s;
  const auto kind = r.get<std::string>("kind", "gaussian_packet");
  s.kind = guarded(r, "kind", [&] { return parse_state_kind(kind); });
  StateParams& p = s.params;
  p.k = r.pair<double>("k", p.k);
  p.t = r.get<double>("t", p.t);
  p.t0 = r.get<double>("t0", p.t0);
  p.x0 = r.pair<double>("x0", p.x0);
  p.p0 = r.pair<double>("p0", p.p0);
  p.omega = r.get<double>("omega", p.omega);
  p.level = r.pair<int>("level", p.level);
  p.seed = r.get<std::uint64_t>("seed", p.seed);
  p.cutoff = r.get<std::size_t>("cutoff", p.cutoff);
  p.amplitude = r.get<double>("amplitude", p.amplitude);
  s.phase_kick = r.get<double>("phase_kick", 0.0);
  s.phase_turns = r.get<int>("phase_turns", 1);
  r.finish();
  return s;
}

PotentialSpec read_potential(Reader r) {
  PotentialSpec p;
  const auto kind = r.get<std::string>("kind", "none");
  if (kind == "none") {
    p.kind = PotentialSpec::Kind::None;
  } else if (kind == "harmonic") {
    p.kind = PotentialSpec::Kind::Harmonic;
  } else {
    r.fail("kind", "expected none or harmonic");
  }
  p.omega = r.get<double>("omega", p.omega);
  if (!(p.omega > 0.0)) r.fail("omega", "must be positive");
  r.finish();
  return p;
}

void read_coefficients(Reader r, RunConfig& cfg) {
  const int forms = int(r.has("preset")) + int(r.has("me")) + int(r.has("variant"));
  if (forms != 1) r.fail("", "give exactly one of preset, me, variant");
  if (r.has("preset")) {
    cfg.coeffs_label = r.require<std::string>("preset");
    cfg.coeffs = guarded(r, "preset", [&] { return preset(cfg.coeffs_label, cfg.constants); });
    if (cfg.coeffs_label.rfind("me", 0) == 0) cfg.me = MEParams{cfg.coeffs.a[0], cfg.coeffs.b[0], cfg.coeffs.b[5]};
  } else if (r.has("me")) {
    Reader m = r.child("me");
    MEParams p{m.require<double>("d1"), m.require<double>("b1"), m.get<double>("b6", 0.0)};
    m.finish();
    cfg.me = p;
    cfg.coeffs = p.expand();
    cfg.coeffs_label = "me";
  } else {
    const auto v = r.require<std::string>("variant");
    if (v != "dg" && v != "ext") r.fail("variant", "expected dg or ext");
    CoeffSet c = CoeffSet::zero(v == "dg" ? Variant::DG : Variant::EXT);
    c.a = r.require<std::vector<double>>("a");
    c.b = r.require<std::vector<double>>("b");
    c.coupling = r.get<double>("coupling", 1.0);
    cfg.coeffs = c;
    cfg.coeffs_label = v + "(explicit)";
  }
  cfg.coeffs.forbidden = r.get<double>("forbidden", cfg.coeffs.forbidden);
  r.finish();
  guarded(r, "", [&] {
    cfg.coeffs.validate();
    return 0;
  });
}

void read_evolution(Reader r, EvolutionConfig& e) {
  e.t_end = r.get<double>("t_end", e.t_end);
  e.dt = r.get<double>("dt", e.dt);
  const auto integ = r.get<std::string>("integrator", to_string(e.integrator));
  e.integrator = guarded(r, "integrator", [&] { return parse_integrator(integ); });
  e.stride = r.get<std::size_t>("stride", e.stride);
  e.norm_drift_tolerance = r.get<double>("norm_drift_tolerance", e.norm_drift_tolerance);
  if (e.t_end < 0.0) r.fail("t_end", "must be non-negative");
  if (e.dt < 0.0) r.fail("dt", "must be non-negative");
  if (e.stride == 0) r.fail("stride", "must be at least 1");
  r.finish();
}

void read_hydro(Reader r, HydroOptions& h) {
  h.relative_floor = r.get<double>("relative_floor", h.relative_floor);
  h.max_masked_fraction = r.get<double>("max_masked_fraction", h.max_masked_fraction);
  r.finish();
}

HillSpec read_bands(Reader r) {
  HillSpec b;
  const auto kind = r.get<std::string>("kind", "mathieu");
  if (kind == "mathieu") {
    b.kind = HillSpec::Kind::Mathieu;
  } else if (kind == "stationary") {
    b.kind = HillSpec::Kind::Stationary;
  } else {
    r.fail("kind", "expected mathieu or stationary");
  }
  b.q = r.get<double>("q", b.q);
  b.amplitude = r.get<double>("amplitude", b.amplitude);
  b.from = r.get<double>("from", b.from);
  b.to = r.get<double>("to", b.to);
  b.samples = r.get<std::size_t>("samples", b.samples);
  b.floquet.relative_tolerance = r.get<double>("relative_tolerance", b.floquet.relative_tolerance);
  b.floquet.initial_steps = r.get<std::size_t>("initial_steps", b.floquet.initial_steps);
  if (!(b.to > b.from)) r.fail("to", "must exceed from");
  if (b.samples < 2) r.fail("samples", "need at least 2");
  r.finish();
  return b;
}

CheckSpec read_check(Reader r) {
  CheckSpec c;
  c.suite = r.get<std::string>("suite", c.suite);
  if (c.suite != "model" && c.suite != "acceptance" && c.suite != "all") {
    r.fail("suite", "expected model, acceptance or all");
  }
  if (r.has("criteria")) {
    for (double v : r.require<std::vector<double>>("criteria")) {
      if (v != static_cast<int>(v) || v < 1 || v > 12) r.fail("criteria", "entries must be integers 1..12");
      c.criteria.push_back(static_cast<int>(v));
    }
  }
  r.finish();
  return c;
}

}  // namespace

Subcommand parse_subcommand(const std::string& name) {
  if (name == "evolve") return Subcommand::Evolve;
  if (name == "bands") return Subcommand::Bands;
  if (name == "check") return Subcommand::Check;
  if (name == "ehrenfest") return Subcommand::Ehrenfest;
  if (name == "separability") return Subcommand::Separability;
  throw ConfigError("unknown subcommand '" + name + "'");
}

std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Evolve: return "evolve";
    case Subcommand::Bands: return "bands";
    case Subcommand::Check: return "check";
    case Subcommand::Ehrenfest: return "ehrenfest";
    case Subcommand::Separability: return "separability";
  }
  return "?";
}

Grid GridSpec::make() const { return Grid::make(n, length); }

std::optional<RealField> PotentialSpec::make(const Grid& grid, const PhysicalConstants& c) const {
  if (kind == Kind::None) return std::nullopt;
  return harmonic_potential(grid, omega, c);
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("not valid JSON: ") + e.what());
  }
  Reader r(j, "");
  RunConfig cfg;
  if (!r.has("version")) r.fail("version", "missing required key");
  cfg.version = r.require<int>("version");
  if (cfg.version != kConfigVersion) r.fail("version", "unsupported version " + std::to_string(cfg.version));
  if (r.has("subcommand")) cfg.subcommand = parse_subcommand(r.require<std::string>("subcommand"));

  // constants first, presets depend on them
  if (r.has("constants")) {
    Reader c = r.child("constants");
    cfg.constants.hbar = c.get<double>("hbar", 1.0);
    cfg.constants.mass = c.get<double>("mass", 1.0);
    c.finish();
    guarded(c, "", [&] {
      cfg.constants.validate();
      return 0;
    });
  }
  if (r.has("grid")) cfg.grid = read_grid(r.child("grid"));
  if (r.has("state")) cfg.state = read_state(r.child("state"));
  if (r.has("coefficients")) {
    read_coefficients(r.child("coefficients"), cfg);
  } else {
    cfg.coeffs = preset("linear");
  }
  if (r.has("potential")) cfg.potential = read_potential(r.child("potential"));
  if (r.has("evolution")) read_evolution(r.child("evolution"), cfg.evolution);
  if (r.has("hydro")) read_hydro(r.child("hydro"), cfg.evolution.hydro);
  if (r.has("bands")) cfg.bands = read_bands(r.child("bands"));
  if (r.has("separability")) {
    Reader s = r.child("separability");
    if (s.has("state")) cfg.separability.second = read_state(s.child("state"));
    if (s.has("potential")) cfg.separability.second_potential = read_potential(s.child("potential"));
    cfg.separability.samples = s.get<std::size_t>("samples", cfg.separability.samples);
    s.finish();
  }
  if (r.has("check")) cfg.check = read_check(r.child("check"));
  if (r.has("output")) {
    Reader o = r.child("output");
    cfg.out_dir = o.get<std::string>("dir", cfg.out_dir);
    cfg.write_snapshots = o.get<bool>("snapshots", cfg.write_snapshots);
    o.finish();
  }
  r.finish();

  cfg.evolution.coeffs = cfg.coeffs;
  cfg.evolution.constants = cfg.constants;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace hnls
