#include "holowave/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "holowave/errors.hpp"

namespace holowave {

namespace {

SpectralField from_samples(const Grid& g, const std::vector<complex>& v) {
  return SpectralField::from_samples(g, std::span<const complex>(v));
}

SpectralField from_samples(const Grid& g, const std::vector<double>& v) {
  return SpectralField::from_samples(g, std::span<const double>(v));
}

bool all_finite(const SpectralField& f) {
  for (const auto& c : f.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

WaveState axpy(const WaveState& y, double a, const TimeDerivative& k) {
  WaveState out = y;
  out.W += a * k.W_t;
  out.Q += a * k.Q_t;
  out.level += a * k.level_t;
  return out;
}

// Holomorphic re-projection with the zero-mode conventions of the state.
void normalise(WaveState& s) {
  double hs = s.strip_depth();
  s.W = project_holomorphic(s.W, hs);
  s.Q = project_holomorphic(s.Q, hs);
  s.W.dealias();
  s.Q.dealias();
  s.Q[0] = 0.0;
}

}  // namespace

WaveState::WaveState(SpectralField w, SpectralField q, PhysicalParams p, double level_,
                     double anchor_, double time)
    : t(time), W(w.as_complex()), Q(q.as_complex()), params(p), level(level_), anchor(anchor_) {
  if (W.grid() != Q.grid()) throw GridMismatch("W and Q live on different grids");
}

double WaveState::strip_depth() const {
  return params.infinite_depth() ? kInfiniteDepth : params.h() + level;
}

WaveState flat_state(const Grid& grid, const PhysicalParams& params, double anchor) {
  return WaveState(SpectralField(grid), SpectralField(grid), params, 0.0, anchor);
}

WaveState state_from_eulerian(const SpectralField& eta, const SpectralField& psi,
                              const PhysicalParams& params, double anchor) {
  ConformalOptions opts;
  opts.anchor = anchor;
  auto map = build_conformal_map(eta, params.h(), opts);
  auto psi_a = transfer_to_holomorphic(psi.real_part(), map);
  auto Q = holomorphic_from_real(psi_a, map.strip_depth());
  WaveState s(map.W(), Q, params, map.level(), anchor);
  normalise(s);
  return s;
}

WaveState resampled(const WaveState& state, int n) {
  Grid target(n, state.grid().length());
  return WaveState(resampled(state.W, target), resampled(state.Q, target), state.params, state.level,
                   state.anchor, state.t);
}

std::pair<SpectralField, SpectralField> eulerian_surface(const WaveState& state) {
  auto map = state.map();
  auto eta = transfer_to_eulerian(state.W.imag_part(), map);
  eta[0] += state.level;
  auto psi = transfer_to_eulerian(state.Q.real_part(), map);
  return {eta, psi};
}

double dispersion_omega(double k, const PhysicalParams& params) {
  double a = std::abs(k);
  return std::sqrt(a * std::abs(tanh_symbol(a, params.h())) * (params.g() + params.kappa() * a * a));
}

double omega_max(const Grid& grid, const PhysicalParams& params, double strip_depth) {
  PhysicalParams p(params.g(), params.kappa(), strip_depth);
  double best = 0.0;
  for (int m = 0; m < grid.size(); ++m) {
    if (grid.retained(m)) best = std::max(best, dispersion_omega(grid.wavenumber(m), p));
  }
  return best;
}

double resolve_dt(const StepperConfig& config, const WaveState& state) {
  if (config.dt > 0.0) return config.dt;
  double w = omega_max(state.grid(), state.params, state.strip_depth());
  if (!(w > 0.0)) throw InvalidArgument("cannot derive a time step from omega_max = 0");
  return config.safety / w;
}

SpectralField compute_F(const WaveState& state, double j_min) {
  const Grid& g = state.grid();
  auto wa = state.W.derivative().samples();
  auto qa = state.Q.derivative().samples();
  std::vector<complex> u(wa.size());
  for (std::size_t i = 0; i < wa.size(); ++i) {
    double J = std::norm(1.0 + wa[i]);
    if (!(J > j_min)) throw DegenerateJacobian("conformal Jacobian degenerate");
    u[i] = complex(0.0, 2.0 * qa[i].imag() / J);
  }
  return project_holomorphic(from_samples(g, u).dealiased(), state.strip_depth());
}

SpectralField gauge_fix(const SpectralField& F, const WaveState& state, double alpha0) {
  complex t0 = 1.0 + state.W.derivative().evaluate(alpha0);
  complex f0 = F.evaluate(alpha0);
  double s = -(f0 * t0).real() / t0.real();
  SpectralField out = F;
  out[0] += s;
  return out;
}

TimeDerivative rhs(const WaveState& state, double j_min) {
  const Grid& g = state.grid();
  const double hs = state.strip_depth();
  const auto& p = state.params;

  auto F = gauge_fix(compute_F(state, j_min), state, state.anchor);
  auto wa_f = state.W.derivative();
  auto wa = wa_f.samples();
  auto qa = state.Q.derivative().samples();
  auto fs = F.samples();
  const std::size_t n = wa.size();

  std::vector<complex> transport(n), advect(n);
  std::vector<double> quad(n);
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    complex t = 1.0 + wa[i];
    double J = std::norm(t);
    transport[i] = fs[i] * t;
    advect[i] = fs[i] * qa[i];
    quad[i] = std::norm(qa[i]) / J;
    m += qa[i].imag() / J;
  }
  m /= static_cast<double>(n);
  const complex im(0.0, m);

  auto W_t = -project_holomorphic(from_samples(g, transport).dealiased(), hs) - im * wa_f;

  auto raw = -from_samples(g, advect).dealiased() + p.g() * tilbert(state.W, hs) -
             from_samples(g, quad).dealiased();
  if (p.kappa() > 0.0) {
    // -i kappa (A - conj A) = 2 kappa Im A with A = W_aa / (J^{1/2} (1 + W_a)).
    auto waa = wa_f.derivative().samples();
    std::vector<double> cap(n);
    for (std::size_t i = 0; i < n; ++i) {
      complex t = 1.0 + wa[i];
      cap[i] = 2.0 * p.kappa() * (waa[i] / (std::abs(t) * t)).imag();
    }
    raw += from_samples(g, cap).dealiased();
  }
  auto Q_t = project_holomorphic(raw, hs) - im * state.Q.derivative();
  Q_t[0] = 0.0;
  return {W_t, Q_t, F, -m};
}

WaveState step(const WaveState& state, const StepperConfig& config) {
  if (config.scheme != "rk4") throw InvalidArgument("unknown scheme " + config.scheme);
  const double dt = resolve_dt(config, state);
  WaveState out = state;
  try {
    auto k1 = rhs(state);
    auto k2 = rhs(axpy(state, 0.5 * dt, k1));
    auto k3 = rhs(axpy(state, 0.5 * dt, k2));
    auto k4 = rhs(axpy(state, dt, k3));
    out.W += (dt / 6.0) * (k1.W_t + 2.0 * k2.W_t + 2.0 * k3.W_t + k4.W_t);
    out.Q += (dt / 6.0) * (k1.Q_t + 2.0 * k2.Q_t + 2.0 * k3.Q_t + k4.Q_t);
    out.level += (dt / 6.0) * (k1.level_t + 2.0 * k2.level_t + 2.0 * k3.level_t + k4.level_t);
  } catch (const DegenerateJacobian& e) {
    throw BlowUp(std::string("degenerate map during step: ") + e.what());
  }
  out.t = state.t + dt;

  const Grid& g = state.grid();
  const double kc = g.fundamental() * g.dealias_cutoff();
  for (int m = 0; m < g.size(); ++m) {
    double r = std::abs(g.wavenumber(m)) / kc;
    double damp = std::exp(-config.filter_strength * dt * std::pow(r, config.filter_order));
    out.W[m] *= damp;
    out.Q[m] *= damp;
  }
  normalise(out);

  if (!all_finite(out.W) || !all_finite(out.Q)) throw BlowUp("non-finite field");
  if (out.W.derivative().max_abs() >= 1.0) throw BlowUp("||W_alpha||_inf reached 1");
  return out;
}

EnergyParts energy_parts(const WaveState& state) {
  const Grid& g = state.grid();
  auto w = state.W.samples();
  auto wa = state.W.derivative().samples();
  auto q = state.Q.samples();
  auto qa = state.Q.derivative().samples();
  EnergyParts e;
  for (int i = 0; i < g.size(); ++i) {
    double eta = w[i].imag() + state.level;
    double xa = 1.0 + wa[i].real();
    e.potential += 0.5 * state.params.g() * eta * eta * xa;
    // psi G(eta) psi dx = phi * phi_beta dalpha = -Re Q Im Q_alpha dalpha.
    e.kinetic += -0.5 * q[i].real() * qa[i].imag();
    e.capillary += state.params.kappa() * (std::abs(1.0 + wa[i]) - xa);
  }
  double dx = g.spacing();
  e.potential *= dx;
  e.kinetic *= dx;
  e.capillary *= dx;
  return e;
}

double hamiltonian(const WaveState& state) { return energy_parts(state).total(); }

double momentum(const WaveState& state) {
  const Grid& g = state.grid();
  auto w = state.W.samples();
  auto qa = state.Q.derivative().samples();
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) s += (w[i].imag() + state.level) * qa[i].real();
  return s * g.spacing();
}

Trajectory simulate(const WaveState& initial, const StepperConfig& config,
                    const SimulateOptions& options, const StateHook& hook) {
  Trajectory traj;
  traj.cadence = std::max(1, options.cadence);
  double dt = resolve_dt(config, initial);
  long n = static_cast<long>(std::ceil(options.t_final / dt - 1e-9));
  if (n < 0) n = 0;
  StepperConfig fixed = config;
  fixed.dt = n > 0 ? options.t_final / n : dt;
  traj.dt = fixed.dt;

  WaveState state = initial;
  auto emit = [&](const WaveState& s) {
    if (hook) hook(s);
    if (options.keep_snapshots) traj.snapshots.push_back(s);
  };
  emit(state);
  for (long i = 1; i <= n; ++i) {
    try {
      state = step(state, fixed);
    } catch (const BlowUp&) {
      if (!options.blowup_checkpoint.empty()) save_checkpoint(options.blowup_checkpoint, state);
      throw;
    }
    state.t = initial.t + i * fixed.dt;
    ++traj.steps;
    if (i % traj.cadence == 0 || i == n) emit(state);
  }
  return traj;
}

// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'H', 'W', 'C', 'K', 'P', 'T', '\0', '\1'};

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InvalidArgument("truncated checkpoint");
  return v;
}

}  // namespace

void write_checkpoint(std::ostream& out, const WaveState& s) {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.grid().size()));
  for (double v : {s.grid().length(), s.t, s.params.g(), s.params.kappa(), s.params.h(), s.level,
                   s.anchor}) {
    put(out, v);
  }
  for (const auto* f : {&s.W, &s.Q}) {
    for (const auto& c : f->coeffs()) {
      put(out, c.real());
      put(out, c.imag());
    }
  }
}

WaveState read_checkpoint(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw InvalidArgument("not a holowave checkpoint");
  }
  auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw InvalidArgument("unsupported checkpoint version " + std::to_string(version));
  }
  auto n = static_cast<int>(get<std::uint32_t>(in));
  double vals[7];
  for (double& v : vals) v = get<double>(in);
  Grid g(n, vals[0]);
  SpectralField W(g), Q(g);
  for (auto* f : {&W, &Q}) {
    for (int m = 0; m < n; ++m) {
      double re = get<double>(in);
      double im = get<double>(in);
      (*f)[m] = complex(re, im);
    }
  }
  return WaveState(W, Q, PhysicalParams(vals[2], vals[3], vals[4]), vals[5], vals[6], vals[1]);
}

void save_checkpoint(const std::string& path, const WaveState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open " + path + " for writing");
  write_checkpoint(out, state);
}

WaveState load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_checkpoint(in);
}

}  // namespace holowave
