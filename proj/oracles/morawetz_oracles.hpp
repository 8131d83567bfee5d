#pragma once

#include <vector>

namespace holowave::oracles {

/// Minimal delta-slowly-varying envelope by Bellman-Ford relaxation over the
/// nearest-neighbour constraints c_j >= 2^{-delta} c_{j+-1} only, starting
/// from c = a.
std::vector<double> relaxed_envelope(const std::vector<double>& a, double delta);

/// True when c dominates a and satisfies every pairwise slowly-varying
/// constraint to relative tolerance tol.
bool is_envelope(const std::vector<double>& c, const std::vector<double>& a, double delta,
                 double tol = 1e-12);

/// Linear standing wave eta = a cos(k x) cos(w t) with w^2 = k tanh(k h)(g + kappa k^2).
struct StandingMode {
  double amplitude, k, g, kappa, h;
  double omega() const;
};

/// Space-time Gauss-Legendre quadrature of the windowed local energy
/// g chi eta^2 + kappa chi eta_x^2 + chi |grad phi|^2 over [0, T] x window x
/// [-h, eta], with chi the unit raised cosine centred at x0.
double standing_mode_local_energy(const StandingMode& mode, double x0, double T, int nt = 64,
                                  int nx = 64, int ny = 48);

}  // namespace holowave::oracles
