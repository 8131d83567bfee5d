#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "holowave/evolution.hpp"
#include "holowave/quadrature.hpp"

namespace holowave {

/// Conformal strip S = [0, L) x [-depth, 0] with a quadrature rule in beta.
struct StripGrid {
  Grid grid;
  double depth = 0.0;
  std::vector<double> beta;    // increasing, -depth and 0 included
  std::vector<double> weight;  // positive, summing to depth

  int levels() const { return static_cast<int>(beta.size()); }
  bool operator==(const StripGrid& o) const {
    return grid == o.grid && depth == o.depth && beta == o.beta;
  }

  /// Composite 8-point Gauss-Lobatto panels clustered geometrically near
  /// beta = 0; `levels` is rounded up to 7 * panels + 1.
  static StripGrid geometric(const Grid& grid, double depth, int levels = 64);
  /// Uniform levels with trapezoidal weights (finite-difference work).
  static StripGrid uniform(const Grid& grid, double depth, int levels);
};

/// Conformal depth used for the strip of a state: h + level, or a truncation
/// depth below which every retained mode has decayed under 1e-16.
double strip_extent(const WaveState& state);

StripGrid default_strip(const WaveState& state, int levels = 64);

enum class Provenance { Neumann, Dirichlet, Derived };

/// Real samples on a StripGrid, values[level][alpha index].
struct StripField {
  StripGrid strip;
  std::vector<std::vector<double>> values;
  Provenance provenance = Provenance::Derived;

  double operator()(int level, int i) const { return values[level][i]; }
  /// Samples on the top level (beta = 0).
  const std::vector<double>& top() const { return values.back(); }
  const std::vector<double>& bottom() const { return values.front(); }
  double max_abs() const;
};

/// Everything at one Eulerian point of the fluid.
struct PointValues {
  complex zeta;  // conformal preimage alpha + i beta
  double phi = 0.0, q = 0.0, theta = 0.0;
  double phi_x = 0.0, phi_y = 0.0;
  double theta_x = 0.0, theta_y = 0.0;
  double phi_t = 0.0, theta_t = 0.0;
};

/// Which quadratic term the Bernoulli trace of phi_t carries.
enum class BernoulliForm { Half, Full };

/// Interior fields of one state, built from holomorphic surface traces.
///
/// phi + i q = Q, theta = Im(W + c zeta / h_s + i c), phi_t and theta_t are
/// the Neumann and Dirichlet extensions of their surface traces.
class FluidSnapshot {
 public:
  explicit FluidSnapshot(const WaveState& state, BernoulliForm form = BernoulliForm::Half);

  const WaveState& state() const { return state_; }
  double strip_depth() const { return hs_; }

  StripField potential(const StripGrid& strip) const;
  StripField stream(const StripGrid& strip) const;
  StripField theta(const StripGrid& strip) const;
  std::pair<StripField, StripField> velocity(const StripGrid& strip) const;
  std::pair<StripField, StripField> theta_gradient(const StripGrid& strip) const;
  StripField phi_t(const StripGrid& strip) const;
  StripField theta_t(const StripGrid& strip) const;

  /// Eulerian x and y = Im Z and the area element |Z'|^2 on the strip.
  StripField x(const StripGrid& strip) const;
  StripField y(const StripGrid& strip) const;
  StripField jacobian(const StripGrid& strip) const;

  /// Surface traces in alpha of phi_t and theta_t.
  SpectralField phi_t_trace() const { return phi_t_.real_part(); }
  SpectralField theta_t_trace() const;

  /// Conformal preimage of the Eulerian point (x, y), Newton from `guess`
  /// (or a flat-strip estimate); throws NoConvergence when the iteration
  /// fails, e.g. for points outside the fluid.
  complex preimage(double x, double y, std::optional<complex> guess = {}) const;
  PointValues at(double x, double y) const;
  PointValues at_zeta(complex zeta) const;

  /// Surface elevation at Eulerian x and the preimage alpha of (x, eta(x)).
  std::pair<double, double> surface_at(double x) const;

 private:
  // Holomorphic field on the strip, evaluated at complex points.
  struct Extension {
    std::vector<complex> neg, pos;  // Laurent coefficients, see .cpp
    double zero = 0.0;
    void build(const SpectralField& u, double h, double k1);
  };

  StripField level_map(const StripGrid& strip, const SpectralField& u, bool imag,
                       Provenance tag) const;
  void check(const StripGrid& strip) const;

  WaveState state_;
  ConformalMap map_;
  double hs_;
  double c_;
  SpectralField W_, Q_, phi_t_, theta_t_;
  double theta_t_mean_ = 0.0;
  Extension eW_, eQ_, ePt_, eTt_;
};

StripField potential_field(const WaveState& state, const StripGrid& strip);
StripField stream_field(const WaveState& state, const StripGrid& strip);
StripField theta_field(const WaveState& state, const StripGrid& strip);
std::pair<StripField, StripField> velocity_field(const WaveState& state, const StripGrid& strip);
StripField phi_t_field(const WaveState& state, const StripGrid& strip);
StripField theta_t_field(const WaveState& state, const StripGrid& strip);

/// Integral over the fluid domain of the product of `fields` times
/// weight(x), computed on the strip with the conformal area element.
/// Throws GridMismatch when a field lives on another StripGrid.
double volume_integral(const std::vector<const StripField*>& fields, const FluidSnapshot& snap,
                       const std::function<double(double)>& weight = {});
double volume_integral(const StripField& field, const FluidSnapshot& snap,
                       const std::function<double(double)>& weight = {});

/// Vertical-line quadrature at Eulerian abscissae: for each x, integrates
/// integrand(PointValues) over y in [-h, eta(x)] (truncated in infinite
/// depth) with geometric Gauss-Legendre panels. Returns one row per x with
/// `components` entries.
struct ColumnOptions {
  int panels = 0;   // 0: log2(depth / first panel width) + 2, at least 3
  int points = 8;
  int threads = 1;  // 0: hardware concurrency
};
std::vector<std::vector<double>> column_integrals(
    const FluidSnapshot& snap, const std::vector<double>& xs, int components,
    const std::function<void(const PointValues&, double* out)>& integrand,
    const ColumnOptions& options = {});

}  // namespace holowave
