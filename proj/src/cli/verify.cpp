#include "holowave/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "holowave/errors.hpp"
#include "holowave/evolution.hpp"
#include "holowave/morawetz.hpp"
#include "oracles/morawetz_oracles.hpp"
#include "oracles/spectral_oracles.hpp"

namespace holowave::cli {

ToleranceProfile ToleranceProfile::named(const std::string& name) {
  if (name == "default") return {name, 1.0};
  if (name == "strict") return {name, 0.1};
  if (name == "loose") return {name, 100.0};
  throw ConfigError("unknown tolerance profile " + name + " (default, strict, loose)");
}

namespace {

constexpr double kPerturbation = 1.01;

// Real field with decaying random coefficients on |j| <= max_index.
SpectralField random_field(const Grid& g, int max_index, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  SpectralField f(g, Parity::Complex);
  for (int j = 0; j <= max_index; ++j) {
    double a = 1.0 / (1.0 + j * j);
    complex c(nd(rng) * a, j == 0 ? 0.0 : nd(rng) * a);
    f[g.slot_of_index(j)] = c;
    if (j > 0) f[g.slot_of_index(-j)] = std::conj(c);
  }
  return f.as_real();
}

VerifyCheck make_check(std::string suite, std::string name, std::string op, double measured,
                       double tolerance) {
  VerifyCheck c{std::move(suite), std::move(name), std::move(op), measured, tolerance, false, {}};
  c.passed = std::isfinite(measured) && measured <= tolerance;
  return c;
}

double factor(const VerifyOptions& o, const std::string& op) {
  return o.perturbed == op ? kPerturbation : 1.0;
}

std::vector<VerifyCheck> operator_suite(const VerifyOptions& o) {
  std::vector<VerifyCheck> out;
  const double s = o.profile.scale;

  // Tilbert multiplier against principal-value kernel quadrature.
  {
    Grid g(64, 8.0);
    const double h = 2.0;
    auto f = random_field(g, 12, 21);
    auto tf = factor(o, "tilbert") * tilbert(f, h);
    auto fn = [&](double x) { return f.evaluate(x).real(); };
    double err = 0.0;
    for (double a : {0.0, 0.77, 2.5, 5.1, 7.3})
      err = std::max(err, std::abs(tf.evaluate(a).real() - oracles::tilbert_kernel(fn, a, h)));
    out.push_back(make_check("operators", "tilbert_vs_kernel", "tilbert", err / tf.max_abs(), 1e-6 * s));
  }

  // Neumann and Dirichlet extensions against a 128 x 128 finite-difference solve.
  {
    const int n = 128;
    const double length = 2.0 * std::numbers::pi, h = 1.0;
    Grid g(n, length);
    auto f = random_field(g, 3, 17);
    auto top = f.real_samples();
    for (auto bottom : {oracles::FdBottom::Neumann, oracles::FdBottom::Dirichlet}) {
      const bool neumann = bottom == oracles::FdBottom::Neumann;
      const std::string op = neumann ? "neumann" : "dirichlet";
      auto fd = oracles::fd_laplace_strip(top, length, h, n, bottom);
      double err = 0.0;
      for (int j = 0; j < n; ++j) {
        double beta = -h + h * j / (n - 1);
        auto ext = neumann ? extend_neumann(f, beta, h) : extend_dirichlet(f, beta, h);
        auto v = ext.real_samples();
        for (int i = 0; i < n; ++i) err = std::max(err, std::abs(factor(o, op) * v[i] - fd[j][i]));
      }
      out.push_back(make_check("operators", op + "_extension_vs_fd", op, err / f.max_abs(), 1e-3 * s));
    }
  }

  // Holomorphic projection: idempotence and fixed points.
  {
    Grid g(128, 6.0);
    const double p = factor(o, "projection");
    for (double h : {0.7, 3.0, kInfiniteDepth}) {
      auto u = make_complex(random_field(g, 40, 5), random_field(g, 40, 6));
      auto pu = p * project_holomorphic(u, h);
      auto ppu = p * project_holomorphic(pu, h);
      std::string tag = is_infinite_depth(h) ? "inf" : std::to_string(h).substr(0, 3);
      out.push_back(make_check("operators", "projection_idempotent_h" + tag, "projection",
                               (ppu - pu).max_abs() / pu.max_abs(), 1e-10 * s));
      auto w = holomorphic_from_real(random_field(g, 40, 7), h);
      auto pw = p * project_holomorphic(w, h);
      out.push_back(make_check("operators", "projection_fixed_point_h" + tag, "projection",
                               (pw - w).max_abs() / w.max_abs(), 1e-10 * s));
    }
  }
  return out;
}

std::vector<VerifyCheck> envelope_suite(const VerifyOptions& o) {
  std::vector<VerifyCheck> out;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  bool valid = true;
  const double delta = 0.1;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(6);
    for (double& v : a) v = u(rng) < 0.3 ? 0.0 : std::pow(10.0, -3.0 * u(rng));
    auto c = frequency_envelope(a, delta);
    for (double& v : c) v *= factor(o, "envelope");
    auto ref = oracles::relaxed_envelope(a, delta);
    double scale = *std::max_element(a.begin(), a.end());
    if (scale == 0.0) continue;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(c[j] - ref[j]) / scale);
    valid = valid && oracles::is_envelope(c, a, delta, 1e-12);
  }
  auto check = make_check("envelope", "minimal_envelope_6_bands", "envelope", worst, 1e-9 * o.profile.scale);
  check.passed = check.passed && valid;
  check.detail["valid_envelope"] = valid;
  out.push_back(check);
  return out;
}

std::vector<VerifyCheck> dispersion_suite(const VerifyOptions& o, std::vector<DispersionRow>* table) {
  auto rows = dispersion_table(o.dispersion, factor(o, "dispersion"));
  std::vector<VerifyCheck> out;
  for (const auto& r : rows) {
    std::string name = "k" + std::to_string(static_cast<int>(std::lround(r.k))) + "_kappa" +
                       std::to_string(r.kappa).substr(0, 4) + "_h" +
                       (is_infinite_depth(r.h) ? std::string("inf") : std::to_string(r.h).substr(0, 3));
    auto c = make_check("dispersion", name, "dispersion", r.rel_error, 1e-4 * o.profile.scale);
    c.detail = to_json(r);
    out.push_back(std::move(c));
  }
  if (table) *table = std::move(rows);
  return out;
}

}  // namespace

DispersionRow measure_dispersion(double k_index, double g, double kappa, double h,
                                 const DispersionOptions& o, double perturb) {
  Grid grid(o.n, 2.0 * std::numbers::pi);
  PhysicalParams p(g, kappa, h);
  const int j = static_cast<int>(k_index);
  const double k = grid.fundamental() * j;
  const double omega = dispersion_omega(k, p);

  // eta = a cos(kx - wt), psi = a w / (k tanh kh) sin(kx - wt).
  std::vector<double> eta(o.n), psi(o.n);
  double b = o.amplitude * omega / (k * tanh_symbol(k, h));
  for (int i = 0; i < o.n; ++i) {
    double x = grid.point(i);
    eta[i] = o.amplitude * std::cos(k * x);
    psi[i] = b * std::sin(k * x);
  }
  auto s0 = state_from_eulerian(SpectralField::from_samples(grid, eta),
                                SpectralField::from_samples(grid, psi), p);
  SimulateOptions so;
  so.t_final = o.periods * 2.0 * std::numbers::pi / omega;
  so.cadence = 1 << 30;  // keeps the initial and final states only
  auto traj = simulate(s0, StepperConfig{}, so);

  auto before = eulerian_surface(s0).first[grid.slot_of_index(j)];
  auto after = eulerian_surface(traj.snapshots.back()).first[grid.slot_of_index(j)];
  // after / before = exp(-i w_m t); the residual phase against exp(-i w t) is
  // far below pi, so no unwrapping is needed.
  double t = so.t_final;
  double phase = std::arg(after / before * std::polar(1.0, omega * t));
  DispersionRow r;
  r.k = k;
  r.g = g;
  r.kappa = kappa;
  r.h = h;
  r.omega_exact = omega;
  r.omega_measured = perturb * (omega - phase / t);
  r.rel_error = std::abs(r.omega_measured - omega) / omega;
  r.steps = static_cast<int>(traj.steps);
  return r;
}

std::vector<DispersionRow> dispersion_table(const DispersionOptions& o, double perturb) {
  std::vector<DispersionRow> out;
  for (double kappa : o.kappas)
    for (double h : o.depths)
      for (int m : o.modes) out.push_back(measure_dispersion(m, 1.0, kappa, h, o, perturb));
  return out;
}

std::vector<std::string> suite_names() { return {"operators", "dispersion", "envelope"}; }

std::vector<VerifyCheck> run_suite(const std::string& suite, const VerifyOptions& o,
                                   std::vector<DispersionRow>* table) {
  if (!o.perturbed.empty()) {
    static const std::vector<std::string> ops = {"tilbert", "neumann", "dirichlet",
                                                 "projection", "dispersion", "envelope"};
    if (std::find(ops.begin(), ops.end(), o.perturbed) == ops.end())
      throw ConfigError("unknown operator to perturb: " + o.perturbed);
  }
  if (suite == "operators") return operator_suite(o);
  if (suite == "envelope") return envelope_suite(o);
  if (suite == "dispersion") return dispersion_suite(o, table);
  if (suite == "all") {
    std::vector<VerifyCheck> out;
    for (const auto& name : suite_names()) {
      auto part = run_suite(name, o, table);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  throw ConfigError("unknown verify suite " + suite + " (operators, dispersion, envelope, all)");
}

nlohmann::json to_json(const VerifyCheck& c) {
  return {{"suite", c.suite},       {"check", c.name},         {"operator", c.op},
          {"measured", c.measured}, {"tolerance", c.tolerance}, {"passed", c.passed},
          {"detail", c.detail}};
}

nlohmann::json to_json(const DispersionRow& r) {
  return {{"k", r.k},
          {"g", r.g},
          {"kappa", r.kappa},
          {"h", is_infinite_depth(r.h) ? nlohmann::json("inf") : nlohmann::json(r.h)},
          {"omega_exact", r.omega_exact},
          {"omega_measured", r.omega_measured},
          {"rel_error", r.rel_error},
          {"steps", r.steps}};
}

}  // namespace holowave::cli
