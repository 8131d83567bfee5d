#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace holowave::oracles {

/// Principal-value quadrature of the strip kernel
///   T f(a) = (1/2h) int_0^inf cosech(pi s / 2h) [f(a - s) - f(a + s)] ds
/// by adaptive Gauss-Kronrod, for a periodic f given as a callable.
double tilbert_kernel(const std::function<double(double)>& f, double alpha, double h);

enum class FdBottom { Neumann, Dirichlet };

/// Second-order five-point Laplace solve on [0,L) x [-h,0] with u = top at
/// beta = 0 and either u_beta = 0 or u = 0 at beta = -h. Periodic in alpha.
/// Returns u[level][i] on n_beta equally spaced levels from -h to 0.
std::vector<std::vector<double>> fd_laplace_strip(const std::vector<double>& top, double length,
                                                  double h, int n_beta, FdBottom bottom);

/// Brute-force value of the sum-space norm
///   inf over f = f1 + f2 of sqrt(|f1|_A^2 + |f2|_B^2)
/// for a field with Fourier coefficients c (one entry per mode) and per-mode
/// weights wa, wb. Searches the real splitting fraction of every mode on a
/// refined grid.
double brute_force_sum_norm(const std::vector<std::complex<double>>& c,
                            const std::vector<double>& wa, const std::vector<double>& wb,
                            double length);

}  // namespace holowave::oracles
