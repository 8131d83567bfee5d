#pragma once

#include <vector>

#include "holowave/spectral.hpp"

namespace holowave {

struct ConformalOptions {
  double anchor = 0.0;  // alpha_0 with Re W(alpha_0) = 0
  int max_iter = 200;
  double tol = 1e-12;
  double j_min = 0.25;
};

/// Conformal parametrisation of the fluid domain by the strip of depth
/// h + level, surface trace Z(alpha) = alpha + W(alpha) + i*level.
///
/// W is holomorphic with mean-zero imaginary part; the constant `level` is
/// the alpha-mean of the surface elevation, so eta(x(alpha)) = Im W + level
/// and the strip bottom maps onto y = -h.
class ConformalMap {
 public:
  ConformalMap(SpectralField w, double level, double depth, double anchor = 0.0);

  const SpectralField& W() const { return w_; }
  const Grid& grid() const { return w_.grid(); }
  double level() const { return level_; }
  double depth() const { return depth_; }
  double anchor() const { return anchor_; }
  /// Depth of the parameter strip, h + level.
  double strip_depth() const;

  SpectralField W_alpha() const { return w_.derivative(); }
  /// |1 + W_alpha|^2 sampled on the grid.
  std::vector<double> jacobian() const;
  double min_jacobian() const;

  /// x(alpha) = alpha + Re W(alpha) on the grid.
  std::vector<double> x_samples() const;
  /// eta(x(alpha)) = Im W(alpha) + level on the grid.
  std::vector<double> y_samples() const;
  double x_of(double alpha) const;
  /// Inverse of x(alpha) by safeguarded Newton iteration.
  double alpha_of(double x) const;

 private:
  SpectralField w_;
  double level_;
  double depth_;
  double anchor_;
};

/// Fixed-point construction of the map whose surface is the graph of eta.
ConformalMap build_conformal_map(const SpectralField& eta, double h,
                                 const ConformalOptions& options = {});

/// The surface elevation eta(x) recovered from a map (Eulerian grid).
SpectralField surface_elevation(const ConformalMap& map);

struct HolomorphicFields {
  SpectralField Q_alpha;
  SpectralField R;  // Q_alpha / (1 + W_alpha) = phi_x - i phi_y on the surface
  SpectralField Y;  // W_alpha / (1 + W_alpha)
  SpectralField b;  // advection velocity Re F; zero until set by the evolution
};

HolomorphicFields derived_fields(const ConformalMap& map, const SpectralField& Q,
                                 double j_min = 0.25);

struct ThetaDerivatives {
  SpectralField theta_x;
  SpectralField theta_y;
};

/// Surface traces of the gradient of the Dirichlet-bottom extension of eta,
/// as functions of alpha.
ThetaDerivatives theta_derivatives(const ConformalMap& map, double j_min = 0.25);

/// theta_xx on the surface: -(1/2)(1 - level/h_s) d/dalpha Im (1 + W_alpha)^-2.
SpectralField theta_xx_holomorphic(const ConformalMap& map, double j_min = 0.25);

/// d/dx (eta_x / sqrt(1 + eta_x^2)) on the Eulerian grid.
SpectralField curvature(const SpectralField& eta);

/// Curvature as a function of alpha from the map.
SpectralField curvature_holomorphic(const ConformalMap& map, double j_min = 0.25);

/// f(x) -> f(x(alpha)).
SpectralField transfer_to_holomorphic(const SpectralField& f_of_x, const ConformalMap& map);
/// f(alpha) -> f(alpha(x)).
SpectralField transfer_to_eulerian(const SpectralField& f_of_alpha, const ConformalMap& map);

/// G(eta) psi on the Eulerian grid via the conformal route.
SpectralField dirichlet_neumann_eta(const SpectralField& eta, const SpectralField& psi, double h,
                                    const ConformalOptions& options = {});

}  // namespace holowave
