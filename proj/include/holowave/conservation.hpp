#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "holowave/fluid_fields.hpp"

namespace holowave {

/// Momentum density I and flux S on the Eulerian x grid at time t.
struct DensityFluxPair {
  int id = 0;
  SpectralField I;
  SpectralField S;
  double t = 0.0;

  double integral() const { return I.integral().real(); }
};

/// Flux terms that can be scaled by the sensitivity hook.
enum class FluxTerm { None, Potential, Gravity, Capillary, Kinetic, ThetaT };

struct PairOptions {
  ColumnOptions column;
  /// Replaces the Zakharov value of psi_t (e.g. a time difference). Its
  /// additive constant is re-pinned to the Bernoulli gauge by the mean.
  std::optional<SpectralField> psi_t;
  FluxTerm perturbed = FluxTerm::None;
  double perturb_factor = 1.01;
};

/// All three pairs of one state; the column quadratures are shared.
std::array<DensityFluxPair, 3> all_pairs(const WaveState& state, const PairOptions& options = {});

DensityFluxPair pair1(const WaveState& state, const PairOptions& options = {});
DensityFluxPair pair2(const WaveState& state, const PairOptions& options = {});
DensityFluxPair pair3(const WaveState& state, const PairOptions& options = {});

/// psi_t(x) from the Zakharov system with zero Bernoulli constant.
SpectralField psi_t_zakharov(const WaveState& state);

/// Centered time difference of psi(x) over states at t - dt and t + dt.
SpectralField psi_t_difference(const WaveState& before, const WaveState& after);

struct ResidualSample {
  double t = 0.0;
  SpectralField r;  // d_t I + d_x S
  double l2 = 0.0;
  double linf = 0.0;
};

/// Centered d_t I plus spectral d_x S at the middle pair. Pairs must share
/// id and grid; throws InvalidArgument otherwise.
ResidualSample residual(const DensityFluxPair& before, const DensityFluxPair& mid,
                        const DensityFluxPair& after);

/// Residuals at every interior sample of an equally spaced series.
/// Throws InsufficientHistory with fewer than three pairs.
std::vector<ResidualSample> residual_series(const std::vector<DensityFluxPair>& series);

/// L2 norm of d_x S, the scale residuals are measured against.
double flux_scale(const DensityFluxPair& pair);

/// Integral of m(x) I(x) dx.
double momentum_weighted(const DensityFluxPair& pair, const std::function<double(double)>& m);

struct I3Identity {
  double weighted_i3 = 0.0;  // int m I3
  double weighted_i2 = 0.0;  // int m I2
  double volume = 0.0;       // double integral of m_x theta q_x
  double defect() const;
};

/// Both sides of int m I3 = int m I2 - double-int m_x theta q_x, from
/// independent quadratures (vertical columns and the conformal strip).
I3Identity i3_identity_check(const WaveState& state, const std::function<double(double)>& m,
                             const std::function<double(double)>& m_x,
                             const PairOptions& options = {});

}  // namespace holowave
