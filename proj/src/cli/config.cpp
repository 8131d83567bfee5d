#include "holowave/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "holowave/errors.hpp"

namespace holowave::cli {

namespace {

// Reads the members of one JSON object and rejects the ones nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(child(key) + " must be a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(child(key) + " must be finite");
    return x;
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(child(key) + " must be an integer");
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw ConfigError(child(key) + " must be a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(child(key) + " must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(child(key) + " must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(child(key) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(child(key) + " must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown key " + child(it.key()));
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
}

void check_version(ObjectReader& r) {
  int v = r.integer("format_version", kFormatVersion);
  if (v != kFormatVersion)
    throw ConfigError("format_version " + std::to_string(v) + " is not supported (expected " +
                      std::to_string(kFormatVersion) + ")");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

RunConfig parse_run_body(ObjectReader& r) {
  RunConfig c;
  if (r.has("params")) {
    ObjectReader p(r.at("params"), r.child("params"));
    c.g = p.number("g", c.g);
    c.kappa = p.number("kappa", c.kappa);
    if (p.has("h")) c.h = parse_depth(p.at("h"), p.child("h"));
    p.finish();
  }
  require(c.g > 0.0, "params.g must be positive");
  require(c.kappa >= 0.0, "params.kappa must be non-negative");
  require(c.h > 0.0, "params.h must be positive or \"inf\"");

  if (r.has("grid")) {
    ObjectReader p(r.at("grid"), r.child("grid"));
    c.n = p.integer("n", c.n);
    c.length = p.number("length", c.length);
    p.finish();
  }
  require(c.n >= 8 && c.n % 2 == 0, "grid.n must be an even integer >= 8");
  require(c.length > 0.0, "grid.length must be positive");

  if (r.has("initial")) {
    ObjectReader p(r.at("initial"), r.child("initial"));
    auto& d = c.initial;
    d.family = p.string("family", d.family);
    d.amplitude = p.number("amplitude", d.amplitude);
    d.mode = p.integer("mode", d.mode);
    d.progressive = p.boolean("progressive", d.progressive);
    d.modes = p.integer("modes", d.modes);
    d.width = p.number("width", d.width);
    d.center = p.number("center", d.center);
    d.carrier = p.number("carrier", d.carrier);
    d.seed = p.unsigned_integer("seed", d.seed);
    p.finish();
  }
  {
    const auto& d = c.initial;
    require(d.family == "flat" || d.family == "single_mode" || d.family == "multi_mode" ||
                d.family == "gaussian_packet",
            "initial.family must be flat, single_mode, multi_mode or gaussian_packet");
    require(d.amplitude >= 0.0, "initial.amplitude must be non-negative");
    require(d.mode >= 1 && d.mode < c.n / 3, "initial.mode must lie in [1, n/3)");
    require(d.modes >= 1 && d.modes < c.n / 3, "initial.modes must lie in [1, n/3)");
    require(d.width > 0.0, "initial.width must be positive");
  }

  if (r.has("stepper")) {
    ObjectReader p(r.at("stepper"), r.child("stepper"));
    auto& s = c.stepper;
    s.dt = p.number("dt", s.dt);
    s.safety = p.number("safety", s.safety);
    s.filter_strength = p.number("filter_strength", s.filter_strength);
    s.filter_order = p.integer("filter_order", s.filter_order);
    s.scheme = p.string("scheme", s.scheme);
    p.finish();
  }
  require(c.stepper.dt >= 0.0, "stepper.dt must be non-negative (0 selects the CFL step)");
  require(c.stepper.safety > 0.0, "stepper.safety must be positive");
  require(c.stepper.filter_strength >= 0.0, "stepper.filter_strength must be non-negative");
  require(c.stepper.filter_order >= 2 && c.stepper.filter_order % 2 == 0,
          "stepper.filter_order must be an even integer >= 2");
  require(c.stepper.scheme == "rk4", "stepper.scheme must be rk4");

  if (r.has("run")) {
    ObjectReader p(r.at("run"), r.child("run"));
    c.t_final = p.number("t_final", c.t_final);
    c.checkpoint_every = p.integer("checkpoint_every", c.checkpoint_every);
    p.finish();
  }
  require(c.t_final > 0.0, "run.t_final must be positive");
  require(c.checkpoint_every >= 0, "run.checkpoint_every must be non-negative");

  if (r.has("diagnostics")) {
    ObjectReader p(r.at("diagnostics"), r.child("diagnostics"));
    auto& d = c.diagnostics;
    d.cadence = p.integer("cadence", d.cadence);
    d.local_laws = p.boolean("local_laws", d.local_laws);
    d.windows = p.numbers("windows", d.windows);
    d.sigma = p.number("sigma", d.sigma);
    d.delta = p.number("delta", d.delta);
    d.epsilon0 = p.number("epsilon0", d.epsilon0);
    d.spacing = p.number("spacing", d.spacing);
    d.oversample = p.integer("oversample", d.oversample);
    d.strip_levels = p.integer("strip_levels", d.strip_levels);
    d.norms = p.boolean("norms", d.norms);
    p.finish();
  }
  {
    const auto& d = c.diagnostics;
    require(d.cadence >= 1, "diagnostics.cadence must be >= 1");
    require(d.sigma >= 0.0 && d.sigma <= 1.0, "diagnostics.sigma must lie in [0, 1]");
    require(d.delta > 0.0 && d.delta < 0.5, "diagnostics.delta must lie in (0, 0.5)");
    require(d.epsilon0 > 0.0, "diagnostics.epsilon0 must be positive");
    require(d.spacing > 0.0, "diagnostics.spacing must be positive");
    require(d.oversample >= 0, "diagnostics.oversample must be non-negative");
    require(d.strip_levels >= 8, "diagnostics.strip_levels must be >= 8");
    require(c.length > 2.0, "grid.length must exceed the window support 2");
  }
  return c;
}

}  // namespace

double parse_depth(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInfiniteDepth;
    throw ConfigError(path + " must be a positive number or \"inf\"");
  }
  if (!j.is_number()) throw ConfigError(path + " must be a positive number or \"inf\"");
  double h = j.get<double>();
  if (!(h > 0.0)) throw ConfigError(path + " must be positive");
  return h;
}

json depth_to_json(double h) { return is_infinite_depth(h) ? json("inf") : json(h); }

NormOptions RunConfig::norm_options() const {
  NormOptions o;
  o.spacing = diagnostics.spacing;
  o.delta = diagnostics.delta;
  o.epsilon0 = diagnostics.epsilon0;
  o.strip_levels = diagnostics.strip_levels;
  o.oversample = diagnostics.oversample;
  return o;
}

std::vector<double> RunConfig::window_centers() const {
  return diagnostics.windows.empty() ? std::vector<double>{0.5 * length} : diagnostics.windows;
}

RunConfig parse_run_config(const json& j) {
  ObjectReader r(j, "");
  check_version(r);
  RunConfig c = parse_run_body(r);
  r.finish();
  return c;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_json_file(path)); }

json to_json(const RunConfig& c) {
  const auto& d = c.initial;
  const auto& s = c.stepper;
  const auto& q = c.diagnostics;
  return json{
      {"format_version", kFormatVersion},
      {"params", {{"g", c.g}, {"kappa", c.kappa}, {"h", depth_to_json(c.h)}}},
      {"grid", {{"n", c.n}, {"length", c.length}}},
      {"initial",
       {{"family", d.family},
        {"amplitude", d.amplitude},
        {"mode", d.mode},
        {"progressive", d.progressive},
        {"modes", d.modes},
        {"width", d.width},
        {"center", d.center},
        {"carrier", d.carrier},
        {"seed", d.seed}}},
      {"stepper",
       {{"dt", s.dt},
        {"safety", s.safety},
        {"filter_strength", s.filter_strength},
        {"filter_order", s.filter_order},
        {"scheme", s.scheme}}},
      {"run", {{"t_final", c.t_final}, {"checkpoint_every", c.checkpoint_every}}},
      {"diagnostics",
       {{"cadence", q.cadence},
        {"local_laws", q.local_laws},
        {"windows", q.windows},
        {"sigma", q.sigma},
        {"delta", q.delta},
        {"epsilon0", q.epsilon0},
        {"spacing", q.spacing},
        {"oversample", q.oversample},
        {"strip_levels", q.strip_levels},
        {"norms", q.norms}}},
  };
}

namespace {

// Linear right-moving wave: eta = a cos(kx), psi = a omega / (k tanh kh) sin(kx),
// applied mode by mode.
SpectralField travelling_potential(const SpectralField& eta, const PhysicalParams& p) {
  const Grid& g = eta.grid();
  SpectralField psi(g, Parity::Complex);
  for (int m = 0; m < g.size(); ++m) {
    int j = g.index_of_slot(m);
    if (j == 0 || 2 * std::abs(j) == g.size()) continue;
    double k = std::abs(g.wavenumber(m));
    double ratio = dispersion_omega(k, p) / (k * tanh_symbol(k, p.h()));
    psi[m] = complex(0.0, j > 0 ? -ratio : ratio) * eta[m];
  }
  return psi.as_real();
}

}  // namespace

WaveState initial_state(const RunConfig& c) {
  const Grid grid = c.grid();
  const PhysicalParams p = c.params();
  const auto& d = c.initial;
  const int n = grid.size();
  std::vector<double> eta(n, 0.0), psi(n, 0.0);
  if (d.family == "single_mode") {
    double k = grid.fundamental() * d.mode;
    for (int i = 0; i < n; ++i) eta[i] = d.amplitude * std::cos(k * grid.point(i));
  } else if (d.family == "multi_mode") {
    std::mt19937_64 rng(d.seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> weight;
    for (int j = 1; j <= d.modes; ++j) {
      double a = weight(rng) / (j * j), ph = phase(rng);
      double k = grid.fundamental() * j;
      for (int i = 0; i < n; ++i) eta[i] += a * std::cos(k * grid.point(i) + ph);
    }
    double peak = 0.0;
    for (double v : eta) peak = std::max(peak, std::abs(v));
    for (double& v : eta) v *= peak > 0.0 ? d.amplitude / peak : 0.0;
  } else if (d.family == "gaussian_packet") {
    double x0 = d.center < 0.0 ? 0.5 * c.length : d.center;
    for (int i = 0; i < n; ++i) {
      // Nearest periodic image of the centre.
      double s = std::remainder(grid.point(i) - x0, c.length);
      eta[i] = d.amplitude * std::exp(-s * s / (d.width * d.width)) * std::cos(d.carrier * s);
    }
  }
  if (d.family == "flat" || d.amplitude == 0.0) return flat_state(grid, p);
  auto eta_f = SpectralField::from_samples(grid, eta);
  auto psi_f = SpectralField::from_samples(grid, psi);
  if (d.progressive) psi_f = travelling_potential(eta_f, p);
  return state_from_eulerian(eta_f, psi_f, p);
}

SweepConfig parse_sweep_config(const json& j) {
  ObjectReader r(j, "");
  check_version(r);
  SweepConfig c;
  if (!r.has("base")) throw ConfigError("sweep config needs a base run config");
  {
    ObjectReader b(r.at("base"), "base");
    c.base = parse_run_body(b);
    b.finish();
  }
  if (!r.has("grid")) throw ConfigError("sweep config needs a grid");
  ObjectReader gr(r.at("grid"), "grid");
  c.g = gr.numbers("g", {});
  c.kappa = gr.numbers("kappa", {});
  c.bond = gr.numbers("bond", {});
  if (gr.has("h")) {
    const json& hs = gr.at("h");
    if (!hs.is_array()) throw ConfigError("grid.h must be an array");
    for (std::size_t i = 0; i < hs.size(); ++i)
      c.h.push_back(parse_depth(hs[i], "grid.h[" + std::to_string(i) + "]"));
  }
  c.epsilon = gr.numbers("epsilon", {});
  if (gr.has("seeds")) {
    const json& s = gr.at("seeds");
    if (!s.is_array()) throw ConfigError("grid.seeds must be an array");
    for (const auto& e : s) {
      if (!e.is_number_integer() || e.get<long long>() < 0)
        throw ConfigError("grid.seeds must hold non-negative integers");
      c.seeds.push_back(e.get<std::uint64_t>());
    }
  }
  gr.finish();
  r.finish();

  if (!c.kappa.empty() && !c.bond.empty())
    throw ConfigError("grid.kappa and grid.bond are mutually exclusive");
  for (double g : c.g) require(g > 0.0, "grid.g entries must be positive");
  for (double k : c.kappa) require(k >= 0.0, "grid.kappa entries must be non-negative");
  for (double b : c.bond) require(b >= 0.0, "grid.bond entries must be non-negative");
  for (double e : c.epsilon) require(e >= 0.0, "grid.epsilon entries must be non-negative");
  if (!c.bond.empty()) {
    auto hs = c.h.empty() ? std::vector<double>{c.base.h} : c.h;
    for (double h : hs)
      require(!is_infinite_depth(h), "grid.bond needs finite depths (the Bond number vanishes at h = inf)");
  }
  return c;
}

SweepConfig load_sweep_config(const std::string& path) {
  return parse_sweep_config(read_json_file(path));
}

json to_json(const SweepConfig& c) {
  json base = to_json(c.base);
  base.erase("format_version");
  json hs = json::array();
  for (double h : c.h) hs.push_back(depth_to_json(h));
  json grid = {{"g", c.g}, {"h", hs}, {"epsilon", c.epsilon}, {"seeds", c.seeds}};
  if (!c.bond.empty())
    grid["bond"] = c.bond;
  else
    grid["kappa"] = c.kappa;
  return json{{"format_version", kFormatVersion}, {"base", base}, {"grid", grid}};
}

std::vector<SweepPoint> expand(const SweepConfig& c) {
  auto or_base = [](const std::vector<double>& v, double b) {
    return v.empty() ? std::vector<double>{b} : v;
  };
  const bool by_bond = !c.bond.empty();
  auto gs = or_base(c.g, c.base.g);
  auto ks = by_bond ? c.bond : or_base(c.kappa, c.base.kappa);
  auto hs = or_base(c.h, c.base.h);
  auto es = or_base(c.epsilon, c.base.initial.amplitude);
  auto seeds = c.seeds.empty() ? std::vector<std::uint64_t>{c.base.initial.seed} : c.seeds;

  std::vector<SweepPoint> out;
  for (double g : gs)
    for (double k : ks)
      for (double h : hs)
        for (double e : es)
          for (auto seed : seeds) {
            SweepPoint p;
            p.index = static_cast<int>(out.size());
            p.g = g;
            p.h = h;
            p.epsilon = e;
            p.seed = seed;
            p.kappa = by_bond ? k * g * h * h : k;
            p.bond = is_infinite_depth(h) ? 0.0 : p.kappa / (g * h * h);
            p.config = c.base;
            p.config.g = g;
            p.config.kappa = p.kappa;
            p.config.h = h;
            p.config.initial.amplitude = e;
            p.config.initial.seed = seed;
            out.push_back(std::move(p));
          }
  return out;
}

}  // namespace holowave::cli
