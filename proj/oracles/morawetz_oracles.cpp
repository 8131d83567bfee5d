#include "oracles/morawetz_oracles.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace holowave::oracles {

std::vector<double> relaxed_envelope(const std::vector<double>& a, double delta) {
  std::vector<double> c = a;
  const double r = std::exp2(-delta);
  const int n = static_cast<int>(c.size());
  for (int pass = 0; pass < n + 1; ++pass) {
    bool changed = false;
    for (int j = 0; j < n; ++j) {
      for (int i : {j - 1, j + 1}) {
        if (i < 0 || i >= n) continue;
        if (c[j] < r * c[i]) {
          c[j] = r * c[i];
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return c;
}

bool is_envelope(const std::vector<double>& c, const std::vector<double>& a, double delta, double tol) {
  const int n = static_cast<int>(c.size());
  for (int j = 0; j < n; ++j) {
    if (c[j] < a[j] * (1.0 - tol)) return false;
    for (int i = 0; i < n; ++i)
      if (c[j] > c[i] * std::exp2(delta * std::abs(i - j)) * (1.0 + tol)) return false;
  }
  return true;
}

double StandingMode::omega() const {
  double t = std::isinf(h) ? 1.0 : std::tanh(k * h);
  return std::sqrt(k * t * (g + kappa * k * k));
}

namespace {

// n-point Gauss-Legendre rule on [a, b], nodes and weights.
template <int N>
void rule(double a, double b, std::vector<double>& x, std::vector<double>& w) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& ab = G::abscissa();
  const auto& wt = G::weights();
  x.clear();
  w.clear();
  double m = 0.5 * (a + b), r = 0.5 * (b - a);
  for (std::size_t i = 0; i < ab.size(); ++i) {
    for (int s : {-1, 1}) {
      if (i == 0 && ab[0] == 0.0 && s == 1) continue;
      x.push_back(m + s * r * ab[i]);
      w.push_back(r * wt[i]);
    }
  }
}

// Composite rule with `panels` copies of the 16-point rule.
void composite(double a, double b, int panels, std::vector<double>& x, std::vector<double>& w) {
  x.clear();
  w.clear();
  std::vector<double> px, pw;
  for (int p = 0; p < panels; ++p) {
    rule<16>(a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels, px, pw);
    x.insert(x.end(), px.begin(), px.end());
    w.insert(w.end(), pw.begin(), pw.end());
  }
}

}  // namespace

double standing_mode_local_energy(const StandingMode& m, double x0, double T, int nt, int nx, int ny) {
  const double pi = std::numbers::pi;
  const double w = m.omega(), k = m.k, a = m.amplitude;
  std::vector<double> tx, tw, xx, xw, yx, yw;
  composite(0.0, T, std::max(1, nt / 16), tx, tw);
  composite(x0 - 1.0, x0 + 1.0, std::max(1, nx / 16), xx, xw);
  const bool deep = std::isinf(m.h);
  double total = 0.0;
  for (std::size_t it = 0; it < tx.size(); ++it) {
    double t = tx[it];
    // phi = A(t) cosh(k (y + h)) cos(k x) / sinh(k h), or A e^{k y} cos(k x) / 1.
    double A = -a * w * std::sin(w * t) / k;
    for (std::size_t ix = 0; ix < xx.size(); ++ix) {
      double x = xx[ix];
      double chi = 0.5 * (1.0 + std::cos(pi * (x - x0)));
      double eta = a * std::cos(k * x) * std::cos(w * t);
      double eta_x = -a * k * std::sin(k * x) * std::cos(w * t);
      double surface = m.g * eta * eta + m.kappa * eta_x * eta_x;
      double bottom = deep ? -40.0 / k : -m.h;
      composite(bottom, eta, std::max(1, ny / 16), yx, yw);
      double vol = 0.0;
      for (std::size_t iy = 0; iy < yx.size(); ++iy) {
        double y = yx[iy];
        double c, s;
        if (deep) {
          c = s = std::exp(k * y);
        } else {
          double sh = std::sinh(k * m.h);
          c = std::cosh(k * (y + m.h)) / sh;
          s = std::sinh(k * (y + m.h)) / sh;
        }
        double px = -A * k * std::sin(k * x) * c;
        double py = A * k * std::cos(k * x) * s;
        vol += yw[iy] * (px * px + py * py);
      }
      total += tw[it] * xw[ix] * chi * (surface + vol);
    }
  }
  return total;
}

}  // namespace holowave::oracles
