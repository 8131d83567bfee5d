#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "holowave/conformal.hpp"
#include "holowave/params.hpp"
#include "holowave/spectral.hpp"

namespace holowave {

/// Holomorphic state (W, Q) at time t.
///
/// W and Q are holomorphic on the strip of depth h + level; mean(Im W) = 0
/// and mean(Re Q) = 0 are maintained by the stepper. On the torus the level
/// (the alpha-mean of the surface height) moves with the flow, and so does
/// the conformal depth.
struct WaveState {
  double t = 0.0;
  SpectralField W;
  SpectralField Q;
  PhysicalParams params;
  double level = 0.0;
  double anchor = 0.0;

  WaveState(SpectralField w, SpectralField q, PhysicalParams p, double level_ = 0.0,
            double anchor_ = 0.0, double time = 0.0);

  const Grid& grid() const { return W.grid(); }
  double strip_depth() const;
  ConformalMap map() const { return ConformalMap(W, level, params.h(), anchor); }
};

/// Flat state with zero velocity.
WaveState flat_state(const Grid& grid, const PhysicalParams& params, double anchor = 0.0);

/// Build the holomorphic state from Eulerian data eta(x), psi(x).
WaveState state_from_eulerian(const SpectralField& eta, const SpectralField& psi,
                              const PhysicalParams& params, double anchor = 0.0);

/// The state on a grid with n points (same length), by spectral resampling.
WaveState resampled(const WaveState& state, int n);

/// Eulerian surface elevation and potential on the x grid.
std::pair<SpectralField, SpectralField> eulerian_surface(const WaveState& state);

struct StepperConfig {
  double dt = 0.0;            // 0 selects safety / omega_max
  double safety = 0.5;
  double filter_strength = 37.0;  // e-folds per unit time at the 2/3 cutoff
  int filter_order = 16;
  std::string scheme = "rk4";
};

/// max over retained modes of sqrt(k tanh(h k) (g + kappa k^2)).
double omega_max(const Grid& grid, const PhysicalParams& params, double strip_depth);

/// Linear dispersion relation omega(k).
double dispersion_omega(double k, const PhysicalParams& params);

/// Resolved time step: config.dt, or safety / omega_max.
double resolve_dt(const StepperConfig& config, const WaveState& state);

/// P_h[(Q_alpha - conj Q_alpha) / J] before gauge fixing.
SpectralField compute_F(const WaveState& state, double j_min = 0.0);

/// Add the real constant that makes Re W_t vanish at the anchor.
SpectralField gauge_fix(const SpectralField& F, const WaveState& state, double alpha0);

struct TimeDerivative {
  SpectralField W_t;
  SpectralField Q_t;
  SpectralField F;  // gauge-fixed
  double level_t = 0.0;
};

/// Right-hand side of the holomorphic system. Besides the projected terms it
/// carries -i m W_alpha and -i m Q_alpha, m = mean(Im Q_alpha / J), with
/// level_t = -m: the periodic correction that keeps the kinematic condition
/// exact while the conformal depth changes.
TimeDerivative rhs(const WaveState& state, double j_min = 0.0);

/// One RK4 step followed by the spectral filter and holomorphic projection.
/// Throws BlowUp when ||W_alpha||_inf >= 1 or a field becomes non-finite.
WaveState step(const WaveState& state, const StepperConfig& config);

double hamiltonian(const WaveState& state);
double momentum(const WaveState& state);

/// Kinetic, gravitational and capillary parts of the Hamiltonian.
struct EnergyParts {
  double kinetic = 0.0;
  double potential = 0.0;
  double capillary = 0.0;
  double total() const { return kinetic + potential + capillary; }
};
EnergyParts energy_parts(const WaveState& state);

struct SimulateOptions {
  double t_final = 0.0;
  int cadence = 1;  // hook every `cadence` steps (and at t = 0 and the end)
  bool keep_snapshots = true;
  std::string blowup_checkpoint;  // written with the last good state on BlowUp
};

using StateHook = std::function<void(const WaveState&)>;

struct Trajectory {
  std::vector<WaveState> snapshots;
  double dt = 0.0;
  int cadence = 1;
  long steps = 0;
};

Trajectory simulate(const WaveState& initial, const StepperConfig& config,
                    const SimulateOptions& options, const StateHook& hook = {});

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const WaveState& state);
WaveState read_checkpoint(std::istream& in);
void save_checkpoint(const std::string& path, const WaveState& state);
WaveState load_checkpoint(const std::string& path);

}  // namespace holowave
