#include "holowave/conservation.hpp"

#include <algorithm>
#include <cmath>

#include "holowave/errors.hpp"

namespace holowave {

namespace {

double scale(FluxTerm term, const PairOptions& o) {
  return o.perturbed == term ? o.perturb_factor : 1.0;
}

struct SurfaceValues {
  std::vector<double> eta, eta_x, psi_x, phi_x, phi_y, phi_t;
};

SurfaceValues surface_values(const FluidSnapshot& fs) {
  const auto& state = fs.state();
  const Grid& g = state.grid();
  auto [eta, psi] = eulerian_surface(state);
  SurfaceValues s;
  s.eta = eta.real_samples();
  s.eta_x = eta.derivative().real_samples();
  s.psi_x = psi.derivative().real_samples();
  s.phi_x.resize(g.size());
  s.phi_y.resize(g.size());
  s.phi_t.resize(g.size());
  for (int i = 0; i < g.size(); ++i) {
    auto v = fs.at_zeta(complex(fs.surface_at(g.point(i)).second, 0.0));
    s.phi_x[i] = v.phi_x;
    s.phi_y[i] = v.phi_y;
    s.phi_t[i] = v.phi_t;
  }
  return s;
}

// Kinematic condition eta_t = phi_y - eta_x phi_x at the surface.
std::vector<double> zakharov(const SurfaceValues& s) {
  std::vector<double> out(s.eta.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = s.phi_t[i] + (s.phi_y[i] - s.eta_x[i] * s.phi_x[i]) * s.phi_y[i];
  return out;
}

double integral_of(const Grid& g, const std::vector<double>& f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * g.spacing();
}

}  // namespace

SpectralField psi_t_zakharov(const WaveState& state) {
  FluidSnapshot fs(state);
  return SpectralField::from_samples(state.grid(), zakharov(surface_values(fs)));
}

SpectralField psi_t_difference(const WaveState& before, const WaveState& after) {
  if (!(before.grid() == after.grid())) throw GridMismatch("psi_t_difference: grids differ");
  double dt = after.t - before.t;
  if (!(dt > 0.0)) throw InvalidArgument("psi_t_difference: states must be ordered in time");
  auto d = eulerian_surface(after).second - eulerian_surface(before).second;
  return (1.0 / dt) * d;
}

std::array<DensityFluxPair, 3> all_pairs(const WaveState& state, const PairOptions& o) {
  const Grid& g = state.grid();
  const int n = g.size();
  const double gr = state.params.g(), kappa = state.params.kappa();
  FluidSnapshot fs(state);
  auto s = surface_values(fs);

  auto psi_t = zakharov(s);
  if (o.psi_t) {
    if (!(o.psi_t->grid() == g)) throw GridMismatch("psi_t override lives on another grid");
    auto alt = o.psi_t->real_samples();
    double shift = integral_of(g, psi_t) / g.length() - integral_of(g, alt) / g.length();
    for (int i = 0; i < n; ++i) psi_t[i] = alt[i] + shift;
  }

  // In infinite depth phi_t tends to the trace mean at depth; integrate the
  // decaying part and account for the constant through the surface height.
  const double mu = is_infinite_depth(state.params.h()) ? fs.phi_t_trace().mean().real() : 0.0;

  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = g.point(i);
  auto col = column_integrals(
      fs, xs, 6,
      [mu](const PointValues& v, double* out) {
        out[0] = v.phi_x;
        out[1] = v.phi_t - mu;
        out[2] = 0.5 * (v.phi_x * v.phi_x - v.phi_y * v.phi_y);
        out[3] = v.theta_y * v.phi_x - v.theta_x * v.phi_y;
        out[4] = v.theta_y * v.phi_t;
        out[5] = v.theta_t * v.phi_y;
      },
      o.column);

  const double fp = scale(FluxTerm::Potential, o), fg = scale(FluxTerm::Gravity, o);
  const double fc = scale(FluxTerm::Capillary, o), fk = scale(FluxTerm::Kinetic, o);
  const double ft = scale(FluxTerm::ThetaT, o);
  std::array<std::vector<double>, 3> I, S;
  for (auto& v : I) v.resize(n);
  for (auto& v : S) v.resize(n);
  for (int i = 0; i < n; ++i) {
    double eta = s.eta[i];
    double grav = fg * 0.5 * gr * eta * eta;
    double cap = fc * kappa * (1.0 - 1.0 / std::sqrt(1.0 + s.eta_x[i] * s.eta_x[i]));
    double kin = fk * col[i][2];
    I[0][i] = col[i][0];
    S[0][i] = -fp * (col[i][1] + mu * eta) - grav + cap + kin;
    I[1][i] = eta * s.psi_x[i];
    S[1][i] = -fp * eta * psi_t[i] - grav + cap + kin;
    I[2][i] = col[i][3];
    S[2][i] = -grav - fp * col[i][4] + cap + kin + ft * col[i][5];
  }
  std::array<DensityFluxPair, 3> out{
      DensityFluxPair{1, SpectralField::from_samples(g, I[0]), SpectralField::from_samples(g, S[0]), state.t},
      DensityFluxPair{2, SpectralField::from_samples(g, I[1]), SpectralField::from_samples(g, S[1]), state.t},
      DensityFluxPair{3, SpectralField::from_samples(g, I[2]), SpectralField::from_samples(g, S[2]), state.t}};
  return out;
}

DensityFluxPair pair1(const WaveState& state, const PairOptions& o) { return all_pairs(state, o)[0]; }
DensityFluxPair pair2(const WaveState& state, const PairOptions& o) { return all_pairs(state, o)[1]; }
DensityFluxPair pair3(const WaveState& state, const PairOptions& o) { return all_pairs(state, o)[2]; }

ResidualSample residual(const DensityFluxPair& before, const DensityFluxPair& mid,
                        const DensityFluxPair& after) {
  if (before.id != mid.id || mid.id != after.id)
    throw InvalidArgument("residual: pairs with different ids");
  if (!(before.I.grid() == mid.I.grid()) || !(mid.I.grid() == after.I.grid()))
    throw GridMismatch("residual: pairs on different grids");
  double span = after.t - before.t;
  if (!(span > 0.0)) throw InvalidArgument("residual: pairs must be ordered in time");
  ResidualSample out{mid.t, (1.0 / span) * (after.I - before.I) + mid.S.derivative()};
  auto r = out.r.real_samples();
  const Grid& g = mid.I.grid();
  double s2 = 0.0;
  for (double v : r) {
    s2 += v * v;
    out.linf = std::max(out.linf, std::abs(v));
  }
  out.l2 = std::sqrt(s2 * g.spacing());
  return out;
}

std::vector<ResidualSample> residual_series(const std::vector<DensityFluxPair>& series) {
  if (series.size() < 3)
    throw InsufficientHistory("residual needs pairs at t - dt, t and t + dt");
  std::vector<ResidualSample> out;
  for (std::size_t i = 1; i + 1 < series.size(); ++i)
    out.push_back(residual(series[i - 1], series[i], series[i + 1]));
  return out;
}

double flux_scale(const DensityFluxPair& pair) { return pair.S.derivative().l2_norm(); }

double momentum_weighted(const DensityFluxPair& pair, const std::function<double(double)>& m) {
  const Grid& g = pair.I.grid();
  auto I = pair.I.real_samples();
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) s += m(g.point(i)) * I[i];
  return s * g.spacing();
}

double I3Identity::defect() const { return std::abs(weighted_i3 - (weighted_i2 - volume)); }

I3Identity i3_identity_check(const WaveState& state, const std::function<double(double)>& m,
                             const std::function<double(double)>& m_x, const PairOptions& o) {
  auto pairs = all_pairs(state, o);
  FluidSnapshot fs(state);
  auto strip = default_strip(state);
  auto theta = fs.theta(strip);
  auto vel = fs.velocity(strip);
  // q_x = -phi_y
  double vol = -volume_integral({&theta, &vel.second}, fs, m_x);
  return {momentum_weighted(pairs[2], m), momentum_weighted(pairs[1], m), vol};
}

}  // namespace holowave
