#include "holowave/morawetz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "holowave/errors.hpp"
#include "holowave/parallel.hpp"

namespace holowave {

WindowMultiplier::WindowMultiplier(double center, double period) : x0(center), length(period) {
  if (!(period > 2.0)) throw InvalidArgument("window needs a period longer than its support");
}

double WindowMultiplier::offset(double x) const {
  double d = std::fmod(x - x0 + 0.5 * length, length);
  if (d < 0.0) d += length;
  return d - 0.5 * length;
}

double WindowMultiplier::chi(double x) const {
  double d = offset(x);
  return std::abs(d) >= 1.0 ? 0.0 : 0.5 * (1.0 + std::cos(std::numbers::pi * d));
}

double WindowMultiplier::chi_x(double x) const {
  double d = offset(x);
  return std::abs(d) >= 1.0 ? 0.0 : -0.5 * std::numbers::pi * std::sin(std::numbers::pi * d);
}

double WindowMultiplier::m(double x) const {
  double d = offset(x);
  double s = std::abs(d) >= 1.0 ? std::copysign(0.5, d)
                                : 0.5 * (d + std::sin(std::numbers::pi * d) / std::numbers::pi);
  return s - d / length;
}

std::vector<double> center_lattice(double length, double spacing) {
  if (!(spacing > 0.0)) throw InvalidArgument("center spacing must be positive");
  std::vector<double> out;
  for (int k = 0; k * spacing < length - 1e-12 * length; ++k) out.push_back(k * spacing);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Samples (x, value) ordered by x in [0, L); windowed sums touch only the
// samples inside the support of each window. Ordering is a counting sort into
// fine bins, exact order inside a bin does not matter for the lookups below
// because bins are scanned whole and chi vanishes outside the support.
class WindowedSum {
 public:
  WindowedSum(const std::vector<std::pair<double, double>>& samples, double length)
  {
    bins_ = std::max<std::size_t>(1, samples.size() / 4);
    width_ = length / static_cast<double>(bins_);
    std::vector<std::size_t> bin(samples.size());
    start_.assign(bins_ + 1, 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      double x = std::fmod(samples[i].first, length);
      if (x < 0.0) x += length;
      bin[i] = std::min(bins_ - 1, static_cast<std::size_t>(x / width_));
      ++start_[bin[i] + 1];
    }
    for (std::size_t b = 0; b < bins_; ++b) start_[b + 1] += start_[b];
    auto fill = start_;
    x_.resize(samples.size());
    v_.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      auto k = fill[bin[i]]++;
      x_[k] = samples[i].first;
      v_[k] = samples[i].second;
    }
  }

  double operator()(const WindowMultiplier& w) const {
    double s = 0.0;
    // Bins overlapping [x0 - 1, x0 + 1], wrapped onto the torus.
    long b0 = static_cast<long>(std::floor((w.x0 - 1.0) / width_));
    long b1 = static_cast<long>(std::floor((w.x0 + 1.0) / width_));
    const long nb = static_cast<long>(bins_);
    if (b1 - b0 + 1 >= nb) b1 = b0 + nb - 1;
    for (long b = b0; b <= b1; ++b) {
      auto k = static_cast<std::size_t>(((b % nb) + nb) % nb);
      for (auto i = start_[k]; i < start_[k + 1]; ++i) s += w.chi(x_[i]) * v_[i];
    }
    return s;
  }

 private:
  std::size_t bins_ = 1;
  double width_ = 1.0;
  std::vector<std::size_t> start_;
  std::vector<double> x_, v_;
};

}  // namespace

std::vector<double> local_energy_density(const WaveState& coarse, const std::vector<double>& centers,
                                         int strip_levels, int oversample) {
  if (oversample < 0) throw InvalidArgument("oversample must be nonnegative");
  // The window is only C^1 and the alpha quadrature error is O(spacing^3)
  // at its edges; spacing 1/256 puts it near 1e-9 relative.
  if (oversample == 0) {
    oversample = 1;
    while (coarse.grid().spacing() / oversample > 1.0 / 256.0) oversample *= 2;
  }
  const WaveState state = oversample == 1 ? coarse : resampled(coarse, oversample * coarse.grid().size());
  const Grid& g = state.grid();
  const int n = g.size();
  const double gr = state.params.g(), kappa = state.params.kappa();
  const double da = g.spacing();

  // Surface terms in alpha: dx = x_alpha d alpha, eta_x = y_alpha / x_alpha.
  std::vector<std::pair<double, double>> surf(n);
  {
    auto w = state.W.samples();
    auto wa = state.W.derivative().samples();
    for (int i = 0; i < n; ++i) {
      double xa = 1.0 + wa[i].real(), ya = wa[i].imag();
      double y = w[i].imag() + state.level;
      surf[i] = {g.point(i) + w[i].real(), (gr * y * y * xa + kappa * ya * ya / xa) * da};
    }
  }

  // Volume term |grad phi|^2 dx dy = |Q_alpha|^2 d alpha d beta on each level.
  auto strip = default_strip(state, strip_levels);
  const double hs = state.strip_depth();
  auto qa = state.Q.derivative();
  std::vector<std::pair<double, double>> vol;
  vol.reserve(static_cast<std::size_t>(strip.levels()) * n);
  for (int l = 0; l < strip.levels(); ++l) {
    auto w = extend_holomorphic(state.W, strip.beta[l], hs).samples();
    auto q = extend_holomorphic(qa, strip.beta[l], hs).samples();
    for (int i = 0; i < n; ++i)
      vol.emplace_back(g.point(i) + w[i].real(), strip.weight[l] * da * std::norm(q[i]));
  }
  WindowedSum s_sum(surf, g.length()), v_sum(vol, g.length());
  std::vector<double> out(centers.size());
  for (std::size_t c = 0; c < centers.size(); ++c) {
    WindowMultiplier w(centers[c], g.length());
    out[c] = s_sum(w) + v_sum(w);
  }
  return out;
}

double LocalEnergy::value() const { return std::sqrt(squared); }

LocalEnergy le_norm(const std::vector<WaveState>& trajectory, const std::vector<double>& centers,
                    int strip_levels, int oversample) {
  LocalEnergy out;
  out.centers = centers;
  out.per_center.assign(centers.size(), 0.0);
  if (trajectory.size() < 2) return out;
  std::vector<double> prev = local_energy_density(trajectory[0], centers, strip_levels, oversample);
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    auto cur = local_energy_density(trajectory[k], centers, strip_levels, oversample);
    double dt = trajectory[k].t - trajectory[k - 1].t;
    for (std::size_t c = 0; c < centers.size(); ++c) out.per_center[c] += 0.5 * dt * (prev[c] + cur[c]);
    prev = std::move(cur);
  }
  auto it = std::max_element(out.per_center.begin(), out.per_center.end());
  if (it != out.per_center.end()) {
    out.squared = *it;
    out.center = centers[it - out.per_center.begin()];
  }
  return out;
}

LocalEnergy le_norm(const std::vector<WaveState>& trajectory, double spacing, int strip_levels,
                    int oversample) {
  if (trajectory.empty()) return {};
  return le_norm(trajectory, center_lattice(trajectory[0].grid().length(), spacing), strip_levels,
                 oversample);
}

// ---------------------------------------------------------------------------

double E14Norm::squared() const {
  return eta_gravity * eta_gravity + eta_capillary * eta_capillary + psi * psi;
}
double E14Norm::value() const { return std::sqrt(squared()); }

E14Norm e14_norm(const SpectralField& eta, const SpectralField& psi, const PhysicalParams& p) {
  const double h = p.h(), g = p.g(), kappa = p.kappa();
  E14Norm out;
  out.eta_gravity = std::pow(g, 0.25) * sobolev_norm(eta, 0.25, h, SobolevFlavor::Inhomogeneous);
  out.eta_capillary = std::pow(kappa, 0.25) * sobolev_norm(eta, 0.75, h, SobolevFlavor::Inhomogeneous);
  out.psi = weighted_norm(psi, [=](double k) {
    double wg = std::pow(g, -0.25) * sobolev_weight(k, 0.75, h, SobolevFlavor::HomogeneousDepth);
    if (kappa == 0.0) return wg;
    double wc = std::pow(kappa, -0.25) * sobolev_weight(k, 0.25, h, SobolevFlavor::HomogeneousDepth);
    return sum_weight(wg, wc);
  });
  return out;
}

E14Norm e14_norm(const WaveState& state) {
  auto [eta, psi] = eulerian_surface(state);
  return e14_norm(eta, psi, state.params);
}

double e0_norm(const SpectralField& eta, const SpectralField& psi, const PhysicalParams& p) {
  const double g = p.g(), kappa = p.kappa(), h = p.h();
  double a = weighted_norm(eta, [=](double k) { return std::sqrt(g + kappa * k * k); });
  double b = sobolev_norm(psi, 0.5, h, SobolevFlavor::HomogeneousDepth);
  return std::hypot(a, b);
}

double x0_norm(const SpectralField& eta, const SpectralField& v, const PhysicalParams& p) {
  double a = sobolev_norm(eta, 1.5, p.h(), SobolevFlavor::Inhomogeneous);
  double b = sobolev_norm(v, 1.0, p.h(), SobolevFlavor::Inhomogeneous) / std::sqrt(p.g());
  return std::hypot(a, b);
}

XKappaNorm xkappa_norm(const std::vector<WaveState>& trajectory) {
  XKappaNorm out;
  if (trajectory.empty()) return out;
  const auto& p = trajectory[0].params;
  LittlewoodPaley lp(trajectory[0].grid(), p.h());
  out.bands.assign(lp.band_count(), 0.0);
  for (int j = 0; j < lp.band_count(); ++j) out.lambdas.push_back(lp.band_frequency(j));
  double eta_h2 = 0.0;
  for (const auto& s : trajectory) {
    auto [eta, psi] = eulerian_surface(s);
    auto a = band_norms(eta, psi.derivative(), s.params);
    for (int j = 0; j < lp.band_count(); ++j) out.bands[j] = std::max(out.bands[j], a[j]);
    eta_h2 = std::max(eta_h2, sobolev_norm(eta, 2.0, p.h(), SobolevFlavor::Inhomogeneous));
  }
  for (double b : out.bands) out.x += b;
  out.x1 = std::pow(p.kappa() / p.g(), 0.25) * eta_h2;
  return out;
}

std::vector<double> frequency_envelope(const std::vector<double>& a, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw InvalidArgument("envelope delta must lie in (0, 0.5)");
  const int n = static_cast<int>(a.size());
  std::vector<double> c(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) c[j] = std::max(c[j], std::exp2(-delta * std::abs(i - j)) * a[i]);
  return c;
}

std::vector<double> band_norms(const SpectralField& eta, const SpectralField& v,
                               const PhysicalParams& params) {
  LittlewoodPaley lp(eta.grid(), params.h());
  std::vector<double> a(lp.band_count());
  for (int j = 0; j < lp.band_count(); ++j) a[j] = x0_norm(lp.band(eta, j), lp.band(v, j), params);
  return a;
}

std::vector<double> band_norms(const WaveState& state) {
  auto [eta, psi] = eulerian_surface(state);
  return band_norms(eta, psi.derivative(), state.params);
}

std::vector<double> frequency_envelope(const SpectralField& eta, const SpectralField& v,
                                       const PhysicalParams& params, double delta) {
  return frequency_envelope(band_norms(eta, v, params), delta);
}

// ---------------------------------------------------------------------------

MorawetzTerms morawetz_terms(const std::array<DensityFluxPair, 3>& pairs,
                             const WindowMultiplier& window, double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw InvalidArgument("sigma must lie in [0, 1]");
  MorawetzTerms out;
  out.functional = sigma * momentum_weighted(pairs[1], [&](double x) { return window.m(x); }) +
                   (1.0 - sigma) * momentum_weighted(pairs[2], [&](double x) { return window.m(x); });
  const Grid& g = pairs[1].S.grid();
  auto s2 = pairs[1].S.real_samples(), s3 = pairs[2].S.real_samples();
  double f = 0.0;
  for (int i = 0; i < g.size(); ++i) f += window.m_x(g.point(i)) * (sigma * s2[i] + (1.0 - sigma) * s3[i]);
  out.flux = f * g.spacing();
  return out;
}

MorawetzTerms morawetz_terms(const WaveState& state, const WindowMultiplier& window, double sigma,
                             const PairOptions& options) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw InvalidArgument("sigma must lie in [0, 1]");
  return morawetz_terms(all_pairs(state, options), window, sigma);
}

double morawetz_functional(const WaveState& state, const WindowMultiplier& window, double sigma,
                           const PairOptions& options) {
  return morawetz_terms(state, window, sigma, options).functional;
}

double flux_integral(const WaveState& state, const WindowMultiplier& window, double sigma,
                     const PairOptions& options) {
  return morawetz_terms(state, window, sigma, options).flux;
}

double time_integral(const std::vector<double>& t, const std::vector<double>& f, TimeRule rule) {
  if (t.size() != f.size()) throw InvalidArgument("time_integral: size mismatch");
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  bool simpson = rule == TimeRule::Simpson && (n - 1) % 2 == 0;
  if (simpson) {
    double h = (t.back() - t.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(t[i] - t[i - 1] - h) > 1e-9 * std::abs(h)) simpson = false;
    if (simpson) {
      double s = f.front() + f.back();
      for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
      return s * h / 3.0;
    }
  }
  double s = 0.0;
  for (std::size_t i = 1; i < n; ++i) s += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

double IdentityClosure::defect() const { return std::abs(change - flux_integral); }

double IdentityClosure::relative_defect() const {
  return flux_magnitude > 0.0 ? defect() / flux_magnitude : defect();
}

IdentityClosure morawetz_identity(const std::vector<WaveState>& trajectory,
                                  const WindowMultiplier& window, double sigma, TimeRule rule,
                                  int jobs) {
  IdentityClosure out;
  const int n = static_cast<int>(trajectory.size());
  if (n < 2) throw InsufficientHistory("the Morawetz identity needs at least two snapshots");
  out.times.resize(n);
  out.functional.resize(n);
  out.flux.resize(n);
  parallel_for(n, jobs, [&](int k) {
    auto terms = morawetz_terms(trajectory[k], window, sigma);
    out.times[k] = trajectory[k].t;
    out.functional[k] = terms.functional;
    out.flux[k] = terms.flux;
  });
  out.change = out.functional.back() - out.functional.front();
  out.flux_integral = time_integral(out.times, out.flux, rule);
  std::vector<double> mag(n);
  for (int k = 0; k < n; ++k) mag[k] = std::abs(out.flux[k]);
  out.flux_magnitude = time_integral(out.times, mag, rule);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

NormReport assemble_report(const std::vector<WaveState>& trajectory, LocalEnergy le,
                           const NormOptions& o) {
  NormReport r;
  r.le = std::move(le);
  r.e14_initial = e14_norm(trajectory.front());
  r.e14_final = e14_norm(trajectory.back());
  auto [eta, psi] = eulerian_surface(trajectory.front());
  r.e0 = e0_norm(eta, psi, trajectory.front().params);
  r.xkappa = xkappa_norm(trajectory);
  r.envelope = frequency_envelope(r.xkappa.bands, o.delta);
  double denom = r.e14_initial.squared() + r.e14_final.squared();
  r.constant_defined = denom > 0.0;
  r.constant = r.constant_defined ? r.le.squared / denom : std::numeric_limits<double>::quiet_NaN();
  r.gate_passed = r.xkappa.total() <= o.epsilon0;
  double e2 = r.e14_initial.squared();
  r.momentum_ratio = e2 > 0.0 ? std::abs(momentum(trajectory.front())) / e2 : 0.0;
  return r;
}

// Time integral of the per-centre densities over the first `count` snapshots.
LocalEnergy integrate_densities(const std::vector<WaveState>& trajectory,
                                const std::vector<std::vector<double>>& density,
                                const std::vector<double>& centers, std::size_t count) {
  LocalEnergy out;
  out.centers = centers;
  out.per_center.assign(centers.size(), 0.0);
  for (std::size_t k = 1; k < count; ++k) {
    double dt = trajectory[k].t - trajectory[k - 1].t;
    for (std::size_t c = 0; c < centers.size(); ++c)
      out.per_center[c] += 0.5 * dt * (density[k - 1][c] + density[k][c]);
  }
  auto it = std::max_element(out.per_center.begin(), out.per_center.end());
  if (it != out.per_center.end()) {
    out.squared = *it;
    out.center = centers[it - out.per_center.begin()];
  }
  return out;
}

}  // namespace

NormReport empirical_constant(const std::vector<WaveState>& trajectory, const NormOptions& o) {
  if (trajectory.empty()) throw InsufficientHistory("empty trajectory");
  return assemble_report(trajectory,
                         le_norm(trajectory, o.spacing, o.strip_levels, o.oversample), o);
}

double DoublingReport::change() const {
  return std::abs(full.constant - half.constant) / half.constant;
}

DoublingReport doubling_report(const std::vector<WaveState>& trajectory, const NormOptions& o) {
  if (trajectory.size() < 3) throw InsufficientHistory("doubling needs at least three snapshots");
  const double t_half = 0.5 * (trajectory.front().t + trajectory.back().t);
  std::size_t mid = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    double d = std::abs(trajectory[k].t - t_half);
    if (d < best) best = d, mid = k;
  }
  const double tol = 1e-9 * std::max(1.0, std::abs(trajectory.back().t));
  if (best > tol) throw InvalidArgument("no snapshot at half the trajectory time");

  auto centers = center_lattice(trajectory[0].grid().length(), o.spacing);
  std::vector<std::vector<double>> density;
  density.reserve(trajectory.size());
  for (const auto& s : trajectory)
    density.push_back(local_energy_density(s, centers, o.strip_levels, o.oversample));

  std::vector<WaveState> head(trajectory.begin(), trajectory.begin() + mid + 1);
  DoublingReport out;
  out.half = assemble_report(head, integrate_densities(trajectory, density, centers, mid + 1), o);
  out.full = assemble_report(trajectory,
                             integrate_densities(trajectory, density, centers, trajectory.size()), o);
  return out;
}

std::vector<WaveState> time_rescaled(const std::vector<WaveState>& trajectory, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("time rescaling factor must be positive");
  std::vector<WaveState> out;
  out.reserve(trajectory.size());
  for (const auto& s : trajectory) {
    PhysicalParams p(lambda * lambda * s.params.g(), lambda * lambda * s.params.kappa(), s.params.h());
    out.emplace_back(s.W, lambda * s.Q, p, s.level, s.anchor, s.t / lambda);
  }
  return out;
}

}  // namespace holowave
