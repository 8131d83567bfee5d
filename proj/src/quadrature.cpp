#include "holowave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "holowave/errors.hpp"

namespace holowave {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
  QuadratureRule r{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(n, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    auto [p, dp] = legendre(n, x);
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

QuadratureRule gauss_lobatto(int n) {
  if (n < 2) throw InvalidArgument("Gauss-Lobatto rule needs at least two nodes");
  QuadratureRule r{std::vector<double>(n), std::vector<double>(n)};
  const int m = n - 1;
  r.nodes[0] = -1.0;
  r.nodes[m] = 1.0;
  // Interior nodes are the roots of P_m'; Newton on P_m' with
  // P_m'' = (2x P_m' - m(m+1) P_m) / (1 - x^2).
  for (int i = 1; i < m; ++i) {
    double x = -std::cos(std::numbers::pi * i / m);
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(m, x);
      double d2p = (2.0 * x * dp - m * (m + 1) * p) / (1.0 - x * x);
      double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
  }
  for (int i = 0; i < n; ++i) {
    double p = legendre(m, r.nodes[i]).first;
    r.weights[i] = 2.0 / (m * (m + 1) * p * p);
  }
  return r;
}

QuadratureRule panel_rule(double depth, int panels, int points, double first_width, bool lobatto) {
  if (!(depth > 0.0) || panels < 1) throw InvalidArgument("panel rule needs positive depth");
  double w0 = std::min(first_width, depth / panels);
  double ratio = 1.0;
  if (w0 * panels < depth * (1.0 - 1e-14)) {
    auto total = [&](double r) { return w0 * (std::pow(r, panels) - 1.0) / (r - 1.0); };
    double lo = 1.0 + 1e-12, hi = 2.0;
    while (total(hi) < depth) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (total(mid) < depth ? lo : hi) = mid;
    }
    ratio = 0.5 * (lo + hi);
  }
  std::vector<double> edges{0.0};
  double w = w0;
  for (int p = 0; p < panels; ++p) {
    edges.push_back(edges.back() - w);
    w *= ratio;
  }
  edges.back() = -depth;

  auto base = lobatto ? gauss_lobatto(points) : gauss_legendre(points);
  QuadratureRule out;
  for (int p = panels - 1; p >= 0; --p) {
    double a = edges[p + 1], b = edges[p];
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < points; ++i) {
      double x = mid + half * base.nodes[i];
      double wt = half * base.weights[i];
      if (lobatto && i == 0 && !out.nodes.empty()) {
        out.weights.back() += wt;
        continue;
      }
      out.nodes.push_back(x);
      out.weights.push_back(wt);
    }
  }
  if (lobatto) {
    out.nodes.front() = -depth;
    out.nodes.back() = 0.0;
  }
  return out;
}

}  // namespace holowave
