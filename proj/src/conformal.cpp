#include "holowave/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "holowave/errors.hpp"

namespace holowave {

namespace {

SpectralField from_complex_samples(const Grid& g, const std::vector<complex>& v) {
  return SpectralField::from_samples(g, std::span<const complex>(v));
}

SpectralField from_real_samples(const Grid& g, const std::vector<double>& v) {
  return SpectralField::from_samples(g, std::span<const double>(v));
}

// 1 + W_alpha on the grid, after checking the Jacobian bound.
std::vector<complex> tangent_samples(const ConformalMap& map, double j_min) {
  auto z = map.W_alpha().samples();
  for (auto& v : z) {
    v += 1.0;
    if (!(std::norm(v) >= j_min)) {
      throw DegenerateJacobian("conformal Jacobian " + std::to_string(std::norm(v)) +
                               " below the admissible minimum");
    }
  }
  return z;
}

}  // namespace

ConformalMap::ConformalMap(SpectralField w, double level, double depth, double anchor)
    : w_(w.as_complex()), level_(level), depth_(depth), anchor_(anchor) {
  if (!is_infinite_depth(depth) && !(depth + level > 0.0)) {
    throw InvalidArgument("surface mean lies below the bottom");
  }
}

double ConformalMap::strip_depth() const {
  return is_infinite_depth(depth_) ? kInfiniteDepth : depth_ + level_;
}

std::vector<double> ConformalMap::jacobian() const {
  auto z = W_alpha().samples();
  std::vector<double> j(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) j[i] = std::norm(1.0 + z[i]);
  return j;
}

double ConformalMap::min_jacobian() const {
  auto j = jacobian();
  return *std::min_element(j.begin(), j.end());
}

std::vector<double> ConformalMap::x_samples() const {
  auto z = w_.samples();
  std::vector<double> x(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) x[i] = grid().point(static_cast<int>(i)) + z[i].real();
  return x;
}

std::vector<double> ConformalMap::y_samples() const {
  auto z = w_.samples();
  std::vector<double> y(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) y[i] = z[i].imag() + level_;
  return y;
}

double ConformalMap::x_of(double alpha) const { return alpha + w_.evaluate(alpha).real(); }

double ConformalMap::alpha_of(double x) const {
  const auto re = w_.real_part();
  const auto re_a = re.derivative();
  double alpha = x - re.evaluate(x).real();
  for (int it = 0; it < 50; ++it) {
    double f = alpha + re.evaluate(alpha).real() - x;
    double df = 1.0 + re_a.evaluate(alpha).real();
    if (!(df > 0.0)) throw NonMonotoneMap("x(alpha) is not increasing");
    double step = f / df;
    alpha -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(alpha))) return alpha;
  }
  throw NonMonotoneMap("inverse of x(alpha) did not converge");
}

ConformalMap build_conformal_map(const SpectralField& eta, double h,
                                 const ConformalOptions& options) {
  const Grid& g = eta.grid();
  const int n = g.size();
  const auto eta_r = eta.real_part();
  auto eta_s = eta_r.real_samples();
  double eta_min = *std::min_element(eta_s.begin(), eta_s.end());
  if (!is_infinite_depth(h) && !(eta_min > -h)) {
    throw InvalidArgument("surface touches the bottom");
  }

  std::vector<double> re_w(n, 0.0);
  std::vector<double> y(n, 0.0);
  SpectralField im_w(g, Parity::Real);
  SpectralField re_field(g, Parity::Real);
  double level = 0.0;

  for (int it = 0; it < options.max_iter; ++it) {
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      double yi = eta_r.evaluate(g.point(i) + re_w[i]).real();
      change = std::max(change, std::abs(yi - y[i]));
      y[i] = yi;
    }
    if (!std::isfinite(change)) break;

    double mean = 0.0;
    for (double v : y) mean += v;
    level = mean / n;
    double hs = is_infinite_depth(h) ? kInfiniteDepth : h + level;
    if (!(hs > 0.0)) break;

    std::vector<double> centred(n);
    for (int i = 0; i < n; ++i) centred[i] = y[i] - level;
    im_w = from_real_samples(g, centred);
    im_w[0] = 0.0;
    re_field = -tilbert_inverse(im_w, hs);
    re_field[0] -= re_field.evaluate(options.anchor).real();
    re_w = re_field.real_samples();

    if (it > 0 && change <= options.tol) {
      ConformalMap map(make_complex(re_field, im_w), level, h, options.anchor);
      if (map.min_jacobian() < options.j_min) break;
      return map;
    }
    // A slope-one surface already needs many sweeps; growth signals divergence.
    if (change > 1e3 * (1.0 + *std::max_element(eta_s.begin(), eta_s.end()) - eta_min)) break;
  }
  throw NoConvergence("conformal map iteration did not converge; surface too steep");
}

SpectralField surface_elevation(const ConformalMap& map) {
  auto e = transfer_to_eulerian(map.W().imag_part(), map);
  e[0] += map.level();
  return e;
}

HolomorphicFields derived_fields(const ConformalMap& map, const SpectralField& Q, double j_min) {
  const Grid& g = map.grid();
  auto t = tangent_samples(map, j_min);
  auto qa = Q.derivative();
  auto wa = map.W_alpha().samples();
  auto qs = qa.samples();
  std::vector<complex> r(t.size()), y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    r[i] = qs[i] / t[i];
    y[i] = wa[i] / t[i];
  }
  HolomorphicFields out{qa, from_complex_samples(g, r).dealiased(),
                        from_complex_samples(g, y).dealiased(), SpectralField(g, Parity::Real)};
  return out;
}

ThetaDerivatives theta_derivatives(const ConformalMap& map, double j_min) {
  const Grid& g = map.grid();
  auto t = tangent_samples(map, j_min);
  double shift = is_infinite_depth(map.depth()) ? 0.0 : map.level() / map.strip_depth();
  std::vector<double> tx(t.size()), ty(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    complex grad = (t[i] - 1.0 + shift) / t[i];
    ty[i] = grad.real();
    tx[i] = grad.imag();
  }
  return {from_real_samples(g, tx).dealiased(), from_real_samples(g, ty).dealiased()};
}

SpectralField theta_xx_holomorphic(const ConformalMap& map, double j_min) {
  const Grid& g = map.grid();
  auto t = tangent_samples(map, j_min);
  double shift = is_infinite_depth(map.depth()) ? 0.0 : map.level() / map.strip_depth();
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = (1.0 / (t[i] * t[i])).imag();
  return (-0.5 * (1.0 - shift)) * from_real_samples(g, v).dealiased().derivative();
}

SpectralField curvature(const SpectralField& eta) {
  auto ex = eta.real_part().derivative().real_samples();
  for (auto& v : ex) v = v / std::sqrt(1.0 + v * v);
  return from_real_samples(eta.grid(), ex).dealiased().derivative();
}

SpectralField curvature_holomorphic(const ConformalMap& map, double j_min) {
  const Grid& g = map.grid();
  auto t = tangent_samples(map, j_min);
  std::vector<complex> a(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) a[i] = t[i] / std::abs(t[i]);
  auto da = from_complex_samples(g, a).dealiased().derivative().samples();
  std::vector<double> k(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) k[i] = (complex(0.0, -1.0) * da[i] / t[i]).real();
  return from_real_samples(g, k).dealiased();
}

SpectralField transfer_to_holomorphic(const SpectralField& f_of_x, const ConformalMap& map) {
  if (f_of_x.grid() != map.grid()) throw GridMismatch("field and map grids differ");
  auto x = map.x_samples();
  auto v = f_of_x.evaluate(x);
  if (f_of_x.is_real()) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].real();
    return from_real_samples(map.grid(), r);
  }
  return from_complex_samples(map.grid(), v);
}

SpectralField transfer_to_eulerian(const SpectralField& f_of_alpha, const ConformalMap& map) {
  if (f_of_alpha.grid() != map.grid()) throw GridMismatch("field and map grids differ");
  const Grid& g = map.grid();
  auto xa = map.W().real_part().derivative().real_samples();
  for (double d : xa) {
    if (!(1.0 + d > 0.0)) throw NonMonotoneMap("x(alpha) is not increasing");
  }
  std::vector<double> alphas(g.size());
  for (int i = 0; i < g.size(); ++i) alphas[i] = map.alpha_of(g.point(i));
  auto v = f_of_alpha.evaluate(alphas);
  if (f_of_alpha.is_real()) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].real();
    return from_real_samples(g, r);
  }
  return from_complex_samples(g, v);
}

SpectralField dirichlet_neumann_eta(const SpectralField& eta, const SpectralField& psi, double h,
                                    const ConformalOptions& options) {
  auto map = build_conformal_map(eta, h, options);
  auto psi_a = transfer_to_holomorphic(psi.real_part(), map);
  auto Q = holomorphic_from_real(psi_a, map.strip_depth());
  auto t = tangent_samples(map, options.j_min);
  auto qa = Q.derivative().samples();
  std::vector<double> gv(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    complex r = qa[i] / t[i];
    double eta_x = t[i].imag() / t[i].real();
    gv[i] = -r.imag() - eta_x * r.real();
  }
  return transfer_to_eulerian(from_real_samples(map.grid(), gv), map);
}

}  // namespace holowave
