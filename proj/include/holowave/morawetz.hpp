#pragma once

#include <functional>
#include <string>
#include <vector>

#include "holowave/conservation.hpp"

namespace holowave {

/// Raised-cosine window chi(x - x0) = (1 + cos(pi (x - x0))) / 2 on
/// |x - x0| <= 1 with unit integral, and the periodic multiplier m with
/// m_x = chi - 1/L (odd about x0).
struct WindowMultiplier {
  double x0 = 0.0;
  double length = 0.0;  // period of the domain

  WindowMultiplier(double center, double period);

  /// x - x0 wrapped into [-L/2, L/2).
  double offset(double x) const;
  double chi(double x) const;
  double chi_x(double x) const;
  double m(double x) const;
  double m_x(double x) const { return chi(x) - 1.0 / length; }
};

/// Window centres k * spacing covering one period.
std::vector<double> center_lattice(double length, double spacing = 0.5);

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

/// Local energy g chi eta^2 + kappa chi eta_x^2 + chi |grad phi|^2 at one time,
/// one value per window centre. The state is first resampled on a grid
/// `oversample` times finer (0: fine enough for spacing <= 1/256).
std::vector<double> local_energy_density(const WaveState& state, const std::vector<double>& centers,
                                         int strip_levels = 64, int oversample = 0);

struct LocalEnergy {
  double squared = 0.0;  // sup over centres of the time-integrated density
  double center = 0.0;   // maximising centre
  std::vector<double> centers;
  std::vector<double> per_center;
  double value() const;
};

/// Trapezoid in time over the snapshots (nonuniform spacing allowed).
LocalEnergy le_norm(const std::vector<WaveState>& trajectory, double spacing = 0.5,
                    int strip_levels = 64, int oversample = 0);
LocalEnergy le_norm(const std::vector<WaveState>& trajectory, const std::vector<double>& centers,
                    int strip_levels = 64, int oversample = 0);

/// Momentum-level norm: eta in g^{-1/4} H^{1/4}_h cap kappa^{-1/4} H^{3/4}_h,
/// psi in g^{1/4} Dot H^{3/4}_h + kappa^{1/4} Dot H^{1/4}_h, with the
/// convention ||f||_{aX} = ||f||_X / a.
struct E14Norm {
  double eta_gravity = 0.0;
  double eta_capillary = 0.0;
  double psi = 0.0;
  double squared() const;
  double value() const;
};
E14Norm e14_norm(const SpectralField& eta, const SpectralField& psi, const PhysicalParams& params);
E14Norm e14_norm(const WaveState& state);

/// Energy norm: eta in g^{-1/2} L^2 cap kappa^{-1/2} Dot H^1, psi in Dot H^{1/2}_h.
double e0_norm(const SpectralField& eta, const SpectralField& psi, const PhysicalParams& params);

/// X_0 norm of one time slice of (eta, v): H^{3/2}_h for eta and
/// g^{-1/2} ||v||_{H^1_h} for the velocity trace v = psi_x.
double x0_norm(const SpectralField& eta, const SpectralField& v, const PhysicalParams& params);

struct XKappaNorm {
  std::vector<double> lambdas;  // band centres, lambdas[0] is the low band
  std::vector<double> bands;    // sup over time of the X_0 norm of each band
  double x = 0.0;               // sum of the band norms
  double x1 = 0.0;              // (kappa/g)^{1/4} sup_t ||eta||_{H^2_h}
  double total() const { return x + x1; }
};
XKappaNorm xkappa_norm(const std::vector<WaveState>& trajectory);

/// X_0 norm of each Littlewood-Paley band of (eta, v) at one time.
std::vector<double> band_norms(const SpectralField& eta, const SpectralField& v,
                               const PhysicalParams& params);
std::vector<double> band_norms(const WaveState& state);

/// Minimal delta-slowly-varying envelope over dyadic bands:
/// c_j = max_i 2^{-delta |i - j|} a_i.
std::vector<double> frequency_envelope(const std::vector<double>& a, double delta = 0.1);
/// Envelope of the dyadic X_0 norms of (eta, v) over one time slice.
std::vector<double> frequency_envelope(const SpectralField& eta, const SpectralField& v,
                                       const PhysicalParams& params, double delta = 0.1);

// ---------------------------------------------------------------------------
// Morawetz functional
// ---------------------------------------------------------------------------

struct MorawetzTerms {
  double functional = 0.0;  // int m (sigma I2 + (1 - sigma) I3)
  double flux = 0.0;        // int m_x (sigma S2 + (1 - sigma) S3)
};

MorawetzTerms morawetz_terms(const std::array<DensityFluxPair, 3>& pairs,
                             const WindowMultiplier& window, double sigma);
MorawetzTerms morawetz_terms(const WaveState& state, const WindowMultiplier& window, double sigma,
                             const PairOptions& options = {});
double morawetz_functional(const WaveState& state, const WindowMultiplier& window, double sigma,
                           const PairOptions& options = {});
double flux_integral(const WaveState& state, const WindowMultiplier& window, double sigma,
                     const PairOptions& options = {});

struct IdentityClosure {
  double change = 0.0;          // functional(T) - functional(0)
  double flux_integral = 0.0;   // time integral of the flux
  double flux_magnitude = 0.0;  // time integral of |flux|
  std::vector<double> times, functional, flux;
  double defect() const;
  double relative_defect() const;
};

enum class TimeRule { Trapezoid, Simpson };

/// Both sides of the Morawetz identity along a trajectory.
IdentityClosure morawetz_identity(const std::vector<WaveState>& trajectory,
                                  const WindowMultiplier& window, double sigma,
                                  TimeRule rule = TimeRule::Trapezoid, int jobs = 1);

/// Integral of samples f(t_i) by the composite rule; Simpson needs an even
/// number of equal intervals and falls back to the trapezoid otherwise.
double time_integral(const std::vector<double>& t, const std::vector<double>& f, TimeRule rule);

// ---------------------------------------------------------------------------
// Empirical constant
// ---------------------------------------------------------------------------

struct NormOptions {
  double spacing = 0.5;
  double delta = 0.1;
  double epsilon0 = 0.1;
  int strip_levels = 64;
  int oversample = 0;
};

struct NormReport {
  LocalEnergy le;
  E14Norm e14_initial, e14_final;
  double e0 = 0.0;
  XKappaNorm xkappa;
  std::vector<double> envelope;
  double constant = 0.0;  // NaN when the denominator vanishes
  bool constant_defined = false;
  bool gate_passed = false;
  double momentum_ratio = 0.0;  // |M| / E14(0)^2
};

NormReport empirical_constant(const std::vector<WaveState>& trajectory,
                              const NormOptions& options = {});

/// Reports over [t0, (t0 + T) / 2] and [t0, T] from one set of local energy
/// densities. Needs a snapshot at the half time.
struct DoublingReport {
  NormReport half, full;
  double change() const;  // |C(full) - C(half)| / C(half)
};
DoublingReport doubling_report(const std::vector<WaveState>& trajectory,
                               const NormOptions& options = {});

/// Exact time rescaling (g, kappa) -> lambda^2 (g, kappa), t -> t / lambda,
/// psi -> lambda psi applied to stored states.
std::vector<WaveState> time_rescaled(const std::vector<WaveState>& trajectory, double lambda);

}  // namespace holowave
