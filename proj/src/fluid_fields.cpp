#include "holowave/fluid_fields.hpp"
#include "holowave/parallel.hpp"

#include <algorithm>
#include <cmath>

#include "holowave/errors.hpp"

namespace holowave {

namespace {

constexpr complex I(0.0, 1.0);

double cutoff_wavenumber(const Grid& g) { return g.fundamental() * (g.size() / 3); }

SpectralField from_real_samples(const Grid& g, const std::vector<double>& v) {
  return SpectralField::from_samples(g, std::span<const double>(v));
}

// sum_{j >= 1} c[j-1] y^j and sum_{j >= 1} j c[j-1] y^j in one Horner pass.
// Written out in real arithmetic: std::complex products carry NaN recovery
// branches that dominate the cost here.
std::pair<complex, complex> horner(const std::vector<complex>& c, complex y, bool with_derivative) {
  const double yr = y.real(), yi = y.imag();
  double pr = 0.0, pi = 0.0, dr = 0.0, di = 0.0;
  for (int j = static_cast<int>(c.size()); j >= 1; --j) {
    double ar = pr + c[j - 1].real(), ai = pi + c[j - 1].imag();
    pr = ar * yr - ai * yi;
    pi = ar * yi + ai * yr;
    if (with_derivative) {
      double br = dr + j * c[j - 1].real(), bi = di + j * c[j - 1].imag();
      dr = br * yr - bi * yi;
      di = br * yi + bi * yr;
    }
  }
  return {complex(pr, pi), complex(dr, di)};
}

// Drop trailing coefficients whose weighted tail sum j |c_j| is below
// roundoff of the whole series; |y| <= 1 in the strip bounds the error.
void trim(std::vector<complex>& c) {
  double total = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) total += (j + 1) * std::abs(c[j]);
  double tail = 0.0;
  std::size_t keep = c.size();
  while (keep > 0) {
    double t = tail + keep * std::abs(c[keep - 1]);
    if (t > 1e-17 * total) break;
    tail = t;
    --keep;
  }
  c.resize(keep);
}

}  // namespace

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

StripGrid StripGrid::geometric(const Grid& grid, double depth, int levels) {
  constexpr int kPoints = 8;
  int panels = std::max(1, (levels - 1 + kPoints - 2) / (kPoints - 1));
  auto rule = panel_rule(depth, panels, kPoints, 4.0 / cutoff_wavenumber(grid), true);
  return StripGrid{grid, depth, rule.nodes, rule.weights};
}

StripGrid StripGrid::uniform(const Grid& grid, double depth, int levels) {
  if (levels < 2) throw InvalidArgument("uniform strip grid needs two levels");
  StripGrid s{grid, depth, std::vector<double>(levels), std::vector<double>(levels)};
  double d = depth / (levels - 1);
  for (int l = 0; l < levels; ++l) {
    s.beta[l] = -depth + l * d;
    s.weight[l] = (l == 0 || l == levels - 1) ? 0.5 * d : d;
  }
  s.beta.back() = 0.0;
  return s;
}

double strip_extent(const WaveState& state) {
  if (!is_infinite_depth(state.params.h())) return state.strip_depth();
  // exp(-k1 D) = 1e-16 for the slowest-decaying mode.
  return 16.0 * std::log(10.0) / state.grid().fundamental();
}

StripGrid default_strip(const WaveState& state, int levels) {
  return StripGrid::geometric(state.grid(), strip_extent(state), levels);
}

double StripField::max_abs() const {
  double m = 0.0;
  for (const auto& row : values)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------
// Extensions
// ---------------------------------------------------------------------------

// A holomorphic u real on the bottom of a strip of depth h continues as
//   u(zeta) = r_0 + sum_{k<0} a_k e^{ik zeta} + sum_{k>0} b_k e^{ik(zeta + 2ih)},
// r_k the coefficients of Re u, a_k = 2 r_k / (1 + e^{-2|k|h}), and
// b_k = 2 r_k / (1 + e^{-2kh}). Both series have ratios of modulus <= 1 in the
// strip, so Horner evaluation is stable.
void FluidSnapshot::Extension::build(const SpectralField& u, double h, double k1) {
  const Grid& g = u.grid();
  int n = g.size();
  int half = n / 2 - 1;  // Nyquist dropped
  neg.assign(half, 0.0);
  pos.clear();
  bool finite = !is_infinite_depth(h);
  if (finite) pos.assign(half, 0.0);
  zero = u[0].real();
  for (int j = 1; j <= half; ++j) {
    int mp = j, mn = n - j;
    complex r_neg = 0.5 * (u[mn] + std::conj(u[mp]));
    double k = j * k1;
    double damp = finite ? std::exp(-2.0 * k * h) : 0.0;
    neg[j - 1] = 2.0 * r_neg / (1.0 + damp);
    if (finite) pos[j - 1] = 2.0 * std::conj(r_neg) / (1.0 + damp);
  }
  trim(neg);
  trim(pos);
}

FluidSnapshot::FluidSnapshot(const WaveState& state, BernoulliForm form)
    : state_(state),
      map_(state.map()),
      hs_(state.strip_depth()),
      c_(state.level),
      W_(state.W),
      Q_(state.Q),
      phi_t_(state.W),
      theta_t_(state.W) {
  const Grid& g = state.grid();
  const auto& p = state.params;

  auto f = derived_fields(map_, Q_);
  auto R = f.R.samples();
  auto t = map_.W_alpha().samples();
  auto th = theta_derivatives(map_);
  auto ty = th.theta_y.real_samples();
  auto curv = curvature_holomorphic(map_).real_samples();
  auto y = map_.y_samples();
  double factor = form == BernoulliForm::Half ? 0.5 : 1.0;

  std::vector<double> pt(g.size()), tt(g.size());
  for (int i = 0; i < g.size(); ++i) {
    complex ti = 1.0 + t[i];
    double phi_x = R[i].real(), phi_y = -R[i].imag();
    double eta_x = ti.imag() / ti.real();
    pt[i] = -p.g() * y[i] - factor * std::norm(R[i]) + p.kappa() * curv[i];
    tt[i] = (1.0 - ty[i]) * (phi_y - eta_x * phi_x);
  }
  phi_t_ = holomorphic_from_real(from_real_samples(g, pt).dealiased(), hs_);

  // Dirichlet extension: periodic holomorphic part plus the mean carried by
  // m (zeta / h_s + i).
  auto tt_field = from_real_samples(g, tt).dealiased();
  theta_t_mean_ = tt_field.mean().real();
  auto tt0 = tt_field.without_mean();
  theta_t_ = make_complex(-tilbert_inverse(tt0, hs_), tt0);

  double k1 = g.fundamental();
  eW_.build(W_, hs_, k1);
  eQ_.build(Q_, hs_, k1);
  ePt_.build(phi_t_, hs_, k1);
  eTt_.build(theta_t_, hs_, k1);
}

SpectralField FluidSnapshot::theta_t_trace() const {
  auto t = theta_t_.imag_part();
  t[0] += theta_t_mean_;
  return t;
}

void FluidSnapshot::check(const StripGrid& strip) const {
  if (strip.grid != state_.grid()) throw GridMismatch("strip grid and state grid differ");
  double d = strip_extent(state_);
  if (std::abs(strip.depth - d) > 1e-12 * d) {
    throw GridMismatch("strip depth does not match the state's conformal depth");
  }
}

StripField FluidSnapshot::level_map(const StripGrid& strip, const SpectralField& u, bool imag,
                                    Provenance tag) const {
  check(strip);
  StripField out{strip, {}, tag};
  out.values.reserve(strip.levels());
  for (double b : strip.beta) {
    auto s = extend_holomorphic(u, b, hs_).samples();
    std::vector<double> row(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) row[i] = imag ? s[i].imag() : s[i].real();
    out.values.push_back(std::move(row));
  }
  return out;
}

StripField FluidSnapshot::potential(const StripGrid& strip) const {
  return level_map(strip, Q_, false, Provenance::Neumann);
}

StripField FluidSnapshot::stream(const StripGrid& strip) const {
  return level_map(strip, Q_, true, Provenance::Dirichlet);
}

namespace {

// Linear part of a Dirichlet extension with top value m.
double dirichlet_mean(double m, double beta, double hs) {
  return is_infinite_depth(hs) ? m : m * (1.0 + beta / hs);
}

}  // namespace

StripField FluidSnapshot::theta(const StripGrid& strip) const {
  auto out = level_map(strip, W_, true, Provenance::Dirichlet);
  for (int l = 0; l < strip.levels(); ++l)
    for (double& v : out.values[l]) v += dirichlet_mean(c_, strip.beta[l], hs_);
  return out;
}

StripField FluidSnapshot::theta_t(const StripGrid& strip) const {
  auto out = level_map(strip, theta_t_, true, Provenance::Dirichlet);
  for (int l = 0; l < strip.levels(); ++l)
    for (double& v : out.values[l]) v += dirichlet_mean(theta_t_mean_, strip.beta[l], hs_);
  return out;
}

StripField FluidSnapshot::phi_t(const StripGrid& strip) const {
  return level_map(strip, phi_t_, false, Provenance::Neumann);
}

std::pair<StripField, StripField> FluidSnapshot::velocity(const StripGrid& strip) const {
  check(strip);
  StripField vx{strip, {}, Provenance::Derived}, vy{strip, {}, Provenance::Derived};
  auto qa = Q_.derivative();
  auto wa = W_.derivative();
  for (double b : strip.beta) {
    auto q = extend_holomorphic(qa, b, hs_).samples();
    auto w = extend_holomorphic(wa, b, hs_).samples();
    std::vector<double> rx(q.size()), ry(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      complex r = q[i] / (1.0 + w[i]);
      rx[i] = r.real();
      ry[i] = -r.imag();
    }
    vx.values.push_back(std::move(rx));
    vy.values.push_back(std::move(ry));
  }
  return {vx, vy};
}

std::pair<StripField, StripField> FluidSnapshot::theta_gradient(const StripGrid& strip) const {
  check(strip);
  StripField tx{strip, {}, Provenance::Derived}, ty{strip, {}, Provenance::Derived};
  auto wa = W_.derivative();
  double shift = is_infinite_depth(hs_) ? 0.0 : c_ / hs_;
  for (double b : strip.beta) {
    auto w = extend_holomorphic(wa, b, hs_).samples();
    std::vector<double> rx(w.size()), ry(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      complex d = (w[i] + shift) / (1.0 + w[i]);
      ry[i] = d.real();
      rx[i] = d.imag();
    }
    tx.values.push_back(std::move(rx));
    ty.values.push_back(std::move(ry));
  }
  return {tx, ty};
}

StripField FluidSnapshot::x(const StripGrid& strip) const {
  auto out = level_map(strip, W_, false, Provenance::Derived);
  const Grid& g = strip.grid;
  for (auto& row : out.values)
    for (int i = 0; i < g.size(); ++i) row[i] += g.point(i);
  return out;
}

StripField FluidSnapshot::y(const StripGrid& strip) const {
  auto out = level_map(strip, W_, true, Provenance::Derived);
  for (int l = 0; l < strip.levels(); ++l)
    for (double& v : out.values[l]) v += strip.beta[l] + c_;
  return out;
}

StripField FluidSnapshot::jacobian(const StripGrid& strip) const {
  check(strip);
  StripField out{strip, {}, Provenance::Derived};
  auto wa = W_.derivative();
  for (double b : strip.beta) {
    auto w = extend_holomorphic(wa, b, hs_).samples();
    std::vector<double> row(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) row[i] = std::norm(1.0 + w[i]);
    out.values.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Point evaluation
// ---------------------------------------------------------------------------

namespace {

struct Powers {
  complex y;  // e^{-i k1 zeta}
  complex z;  // e^{i k1 (zeta + 2 i h)}
};

Powers powers(complex zeta, double k1, double hs) {
  Powers p;
  p.y = std::exp(-I * k1 * zeta);
  p.z = is_infinite_depth(hs) ? complex(0.0) : std::exp(I * k1 * (zeta + 2.0 * I * hs));
  return p;
}

// Value and zeta-derivative of an extension at precomputed powers.
template <class E>
std::pair<complex, complex> eval(const E& e, const Powers& p, double k1, bool with_derivative = true) {
  // Derivative: coefficient j picks up -i j k1 (negative side) and i j k1
  // (positive side).
  auto [vn, dn] = horner(e.neg, p.y, with_derivative);
  complex v = e.zero + vn;
  complex d = -I * k1 * dn;
  if (!e.pos.empty()) {
    auto [vp, dp] = horner(e.pos, p.z, with_derivative);
    v += vp;
    d += I * k1 * dp;
  }
  return {v, d};
}

}  // namespace

std::pair<double, double> FluidSnapshot::surface_at(double x) const {
  double alpha = map_.alpha_of(x);
  return {W_.evaluate(alpha).imag() + c_, alpha};
}

complex FluidSnapshot::preimage(double x, double y, std::optional<complex> guess) const {
  complex zeta;
  if (guess) {
    zeta = *guess;
  } else {
    auto [eta, alpha] = surface_at(x);
    double beta = is_infinite_depth(hs_) ? y - eta : (y - eta) * hs_ / (eta + state_.params.h());
    zeta = complex(alpha, std::min(beta, 0.0));
  }
  const double k1 = state_.grid().fundamental();
  const complex target(x, y);
  for (int it = 0; it < 60; ++it) {
    auto [w, dw] = eval(eW_, powers(zeta, k1, hs_), k1);
    complex step = (zeta + w + I * c_ - target) / (1.0 + dw);
    zeta -= step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(zeta))) return zeta;
  }
  throw NoConvergence("conformal preimage of an Eulerian point did not converge");
}

PointValues FluidSnapshot::at_zeta(complex zeta) const {
  const double k1 = state_.grid().fundamental();
  auto p = powers(zeta, k1, hs_);
  auto [w, dw] = eval(eW_, p, k1);
  auto [q, dq] = eval(eQ_, p, k1);
  complex pt = eval(ePt_, p, k1, false).first;
  complex tt = eval(eTt_, p, k1, false).first;
  PointValues v;
  v.zeta = zeta;
  double beta = zeta.imag();
  complex zp = 1.0 + dw;
  complex r = dq / zp;
  v.phi = q.real();
  v.q = q.imag();
  v.phi_x = r.real();
  v.phi_y = -r.imag();
  double shift = is_infinite_depth(hs_) ? 0.0 : c_ / hs_;
  complex grad = (dw + shift) / zp;
  v.theta_y = grad.real();
  v.theta_x = grad.imag();
  v.theta = w.imag() + dirichlet_mean(c_, beta, hs_);
  v.phi_t = pt.real();
  v.theta_t = tt.imag() + dirichlet_mean(theta_t_mean_, beta, hs_);
  return v;
}

PointValues FluidSnapshot::at(double x, double y) const { return at_zeta(preimage(x, y)); }

StripField potential_field(const WaveState& state, const StripGrid& strip) {
  return FluidSnapshot(state).potential(strip);
}

StripField stream_field(const WaveState& state, const StripGrid& strip) {
  return FluidSnapshot(state).stream(strip);
}

StripField theta_field(const WaveState& state, const StripGrid& strip) {
  return FluidSnapshot(state).theta(strip);
}

std::pair<StripField, StripField> velocity_field(const WaveState& state, const StripGrid& strip) {
  return FluidSnapshot(state).velocity(strip);
}

StripField phi_t_field(const WaveState& state, const StripGrid& strip) {
  return FluidSnapshot(state).phi_t(strip);
}

StripField theta_t_field(const WaveState& state, const StripGrid& strip) {
  return FluidSnapshot(state).theta_t(strip);
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

double volume_integral(const std::vector<const StripField*>& fields, const FluidSnapshot& snap,
                       const std::function<double(double)>& weight) {
  if (fields.empty()) throw InvalidArgument("volume_integral needs at least one field");
  const StripGrid& strip = fields.front()->strip;
  for (auto* f : fields) {
    if (!(f->strip == strip)) throw GridMismatch("fields live on different strip grids");
  }
  auto J = snap.jacobian(strip);
  std::optional<StripField> X;
  if (weight) X = snap.x(strip);
  const Grid& g = strip.grid;
  double total = 0.0;
  for (int l = 0; l < strip.levels(); ++l) {
    double row = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      double v = J(l, i);
      for (auto* f : fields) v *= (*f)(l, i);
      if (weight) v *= weight((*X)(l, i));
      row += v;
    }
    total += strip.weight[l] * row;
  }
  return total * g.spacing();
}

double volume_integral(const StripField& field, const FluidSnapshot& snap,
                       const std::function<double(double)>& weight) {
  return volume_integral(std::vector<const StripField*>{&field}, snap, weight);
}

std::vector<std::vector<double>> column_integrals(
    const FluidSnapshot& snap, const std::vector<double>& xs, int components,
    const std::function<void(const PointValues&, double* out)>& integrand,
    const ColumnOptions& options) {
  const auto& state = snap.state();
  const Grid& g = state.grid();
  const double h = state.params.h();
  const double first = 4.0 / cutoff_wavenumber(g);
  const double hs = snap.strip_depth();
  std::vector<std::vector<double>> out(xs.size(), std::vector<double>(components, 0.0));

  parallel_for(static_cast<int>(xs.size()), options.threads, [&](int n) {
    std::vector<double> buf(components);
    auto [eta, alpha] = snap.surface_at(xs[n]);
    double depth = is_infinite_depth(h) ? eta + strip_extent(state) : eta + h;
    int panels = options.panels > 0
                     ? options.panels
                     : std::max(3, static_cast<int>(std::ceil(std::log2(depth / first))) + 2);
    auto rule = panel_rule(depth, panels, options.points, first, false);
    complex zeta(alpha, 0.0);
    // Walk down from the surface, seeding Newton with the previous preimage.
    for (int j = static_cast<int>(rule.nodes.size()) - 1; j >= 0; --j) {
      double y = eta + rule.nodes[j];
      double prev = j + 1 < static_cast<int>(rule.nodes.size()) ? rule.nodes[j + 1] : 0.0;
      double dy = rule.nodes[j] - prev;
      zeta += complex(0.0, is_infinite_depth(hs) ? dy : dy * hs / depth);
      zeta = snap.preimage(xs[n], y, zeta);
      integrand(snap.at_zeta(zeta), buf.data());
      for (int c = 0; c < components; ++c) out[n][c] += rule.weights[j] * buf[c];
    }
  });
  return out;
}

}  // namespace holowave
