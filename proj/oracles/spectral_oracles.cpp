#include "oracles/spectral_oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace holowave::oracles {

double tilbert_kernel(const std::function<double(double)>& f, double alpha, double h) {
  const double b = std::numbers::pi / (2.0 * h);
  auto integrand = [&](double s) {
    // sinh underflows nothing here; s = 0 is never sampled by Gauss-Kronrod.
    return (f(alpha - s) - f(alpha + s)) / std::sinh(b * s);
  };
  // cosech(b s) < 1e-17 beyond s = 40/b.
  const double upper = 40.0 / b;
  double total = 0.0;
  // Split at multiples of h so each panel sees a smooth, moderately varying integrand.
  int panels = static_cast<int>(std::ceil(upper / h));
  for (int p = 0; p < panels; ++p) {
    double a0 = p * h;
    double a1 = std::min(upper, (p + 1) * h);
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a0, a1, 15,
                                                                           1e-14, &err);
  }
  return total / (2.0 * h);
}

std::vector<std::vector<double>> fd_laplace_strip(const std::vector<double>& top, double length,
                                                  double h, int n_beta, FdBottom bottom) {
  const int n = static_cast<int>(top.size());
  const double da = length / n;
  const double db = h / (n_beta - 1);
  const double pi = std::numbers::pi;

  // Plain DFT in alpha; the discrete periodic Laplacian is diagonal in it.
  std::vector<std::complex<double>> hat(n);
  for (int m = 0; m < n; ++m) {
    std::complex<double> s = 0.0;
    for (int i = 0; i < n; ++i) s += top[i] * std::polar(1.0, -2.0 * pi * m * i / n);
    hat[m] = s / static_cast<double>(n);
  }

  // Levels 0..n_beta-1 run from beta = -h to beta = 0.
  std::vector<std::vector<std::complex<double>>> modes(n_beta,
                                                       std::vector<std::complex<double>>(n));
  for (int m = 0; m < n; ++m) {
    double lam = (2.0 - 2.0 * std::cos(2.0 * pi * m / n)) / (da * da);
    // Unknowns j = 0..n_beta-2 (the top level is prescribed).
    int nu = n_beta - 1;
    std::vector<double> lower(nu, 0.0), diag(nu, 0.0), upper(nu, 0.0);
    std::vector<std::complex<double>> rhs(nu, 0.0);
    double c = 1.0 / (db * db);
    for (int j = 0; j < nu; ++j) {
      diag[j] = -2.0 * c - lam;
      lower[j] = c;
      upper[j] = c;
    }
    if (bottom == FdBottom::Neumann) {
      // Ghost point u_{-1} = u_{1}.
      upper[0] = 2.0 * c;
    } else {
      // u_0 = 0: replace the first row by the identity.
      diag[0] = 1.0;
      upper[0] = 0.0;
      lower[0] = 0.0;
    }
    rhs[nu - 1] -= c * hat[m];
    // Thomas algorithm.
    std::vector<double> cp(nu);
    std::vector<std::complex<double>> dp(nu);
    cp[0] = upper[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (int j = 1; j < nu; ++j) {
      double denom = diag[j] - lower[j] * cp[j - 1];
      cp[j] = upper[j] / denom;
      dp[j] = (rhs[j] - lower[j] * dp[j - 1]) / denom;
    }
    std::vector<std::complex<double>> u(nu);
    u[nu - 1] = dp[nu - 1];
    for (int j = nu - 2; j >= 0; --j) u[j] = dp[j] - cp[j] * u[j + 1];
    for (int j = 0; j < nu; ++j) modes[j][m] = u[j];
    modes[n_beta - 1][m] = hat[m];
  }

  std::vector<std::vector<double>> out(n_beta, std::vector<double>(n));
  for (int j = 0; j < n_beta; ++j) {
    for (int i = 0; i < n; ++i) {
      std::complex<double> s = 0.0;
      for (int m = 0; m < n; ++m) s += modes[j][m] * std::polar(1.0, 2.0 * pi * m * i / n);
      out[j][i] = s.real();
    }
  }
  return out;
}

double brute_force_sum_norm(const std::vector<std::complex<double>>& c,
                            const std::vector<double>& wa, const std::vector<double>& wb,
                            double length) {
  if (c.empty() || c.size() > 2 || wa.size() != c.size() || wb.size() != c.size()) {
    throw std::invalid_argument("brute-force splitting handles one or two modes");
  }
  const int dims = static_cast<int>(c.size());
  auto cost = [&](const double* t) {
    double s = 0.0;
    for (int d = 0; d < dims; ++d) {
      double a2 = std::norm(c[d]);
      s += wa[d] * wa[d] * t[d] * t[d] * a2 + wb[d] * wb[d] * (1.0 - t[d]) * (1.0 - t[d]) * a2;
    }
    return s * length;
  };
  double centre[2] = {0.5, 0.5};
  double radius = 1.0;
  const int steps = 40;
  double best = std::numeric_limits<double>::infinity();
  for (int round = 0; round < 60; ++round) {
    double best_t[2] = {centre[0], centre[1]};
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; j <= (dims == 2 ? steps : 0); ++j) {
        double t[2] = {centre[0] - radius + 2.0 * radius * i / steps,
                       centre[1] - radius + 2.0 * radius * j / steps};
        double v = cost(t);
        if (v < best) {
          best = v;
          best_t[0] = t[0];
          best_t[1] = t[1];
        }
      }
    }
    centre[0] = best_t[0];
    centre[1] = best_t[1];
    radius *= 0.25;
  }
  return std::sqrt(best);
}

}  // namespace holowave::oracles
