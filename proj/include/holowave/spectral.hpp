#pragma once

#include <functional>
#include <vector>

#include "holowave/params.hpp"
#include "holowave/spectral_field.hpp"

namespace holowave {

// ---------------------------------------------------------------------------
// Scalar symbols
// ---------------------------------------------------------------------------

/// tanh(h k), or sign(k) in infinite depth.
double tanh_symbol(double k, double h);

/// cosh((beta+h)k)/cosh(hk), evaluated without overflow; exp(beta|k|) when
/// h is infinite.
double neumann_symbol(double k, double beta, double h);

/// sinh((beta+h)k)/sinh(hk) with the k = 0 limit (beta+h)/h.
double dirichlet_symbol(double k, double beta, double h);

/// Apply an arbitrary symbol m(k) slot by slot. Real symbols that are even
/// in k preserve the parity tag.
SpectralField apply_symbol(const SpectralField& f, const std::function<double(double)>& symbol);

// ---------------------------------------------------------------------------
// Multiplier operators on the flat strip
// ---------------------------------------------------------------------------

/// Multiplier -i tanh(hD); the Hilbert transform when h is infinite.
SpectralField tilbert(const SpectralField& f, double h);

/// Multiplier i / tanh(hD) on k != 0. Throws NonZeroMean when the zero mode
/// exceeds `tol` times the coefficient norm.
SpectralField tilbert_inverse(const SpectralField& f, double h, double tol = 1e-12);

SpectralField extend_neumann(const SpectralField& f, double beta, double h);
SpectralField extend_dirichlet(const SpectralField& f, double beta, double h);

enum class Bottom { Neumann, Dirichlet };

/// beta-derivative at the top of the corresponding extension.
SpectralField dtn_flat(const SpectralField& f, double h, Bottom which);

// ---------------------------------------------------------------------------
// Holomorphic structure
// ---------------------------------------------------------------------------

/// Projection onto traces of strip-holomorphic functions that are real on the
/// bottom. The real mean passes through; the imaginary mean is removed.
SpectralField project_holomorphic(const SpectralField& u, double h);

/// The holomorphic field with real part `re`: re - i T_h re.
SpectralField holomorphic_from_real(const SpectralField& re, double h);

/// ||Im u + T_h Re u||_{L^2}.
double holomorphy_defect(const SpectralField& u, double h);

/// True when the defect is below tol * (||u|| + 1e-300).
bool is_holomorphic(const SpectralField& u, double h, double tol = 1e-10);

/// Trace at depth beta of the holomorphic extension of u:
/// P_N-extension of Re u plus i times the P_D-extension of Im u.
SpectralField extend_holomorphic(const SpectralField& u, double beta, double h);

/// Integral of T_h Re u * T_h Re v + Im u * Im v.
double inner_product_hh(const SpectralField& u, const SpectralField& v, double h);

// ---------------------------------------------------------------------------
// Littlewood-Paley decomposition
// ---------------------------------------------------------------------------

/// Smooth dyadic partition starting at lambda_low = max(1/h, 2 pi / L).
///
/// Band 0 is the low-frequency piece P_{<lambda_low}; band j >= 1 is
/// centred at lambda_low * 2^j and overlaps its neighbours by one octave.
class LittlewoodPaley {
 public:
  LittlewoodPaley(const Grid& grid, double h);

  double lambda_low() const { return lambda_low_; }
  int band_count() const { return bands_; }
  /// Centre frequency of band j (lambda_low for the low band).
  double band_frequency(int j) const;
  /// Band index whose centre is lambda; throws InvalidArgument otherwise.
  int band_of(double lambda) const;
  /// Multiplier of band j at wavenumber k.
  double weight(int j, double k) const;

  SpectralField band(const SpectralField& f, int j) const;
  std::vector<SpectralField> decompose(const SpectralField& f) const;

 private:
  double cumulative(int j, double k) const;

  Grid grid_;
  double lambda_low_;
  int bands_;
};

SpectralField band_filter(const SpectralField& f, double lambda, double h);
std::vector<SpectralField> lp_decompose(const SpectralField& f, double h);

// ---------------------------------------------------------------------------
// Sobolev-type norms
// ---------------------------------------------------------------------------

enum class SobolevFlavor {
  Homogeneous,      // |D|^s
  Inhomogeneous,    // Dot H^s intersected with h^s L^2
  HomogeneousDepth  // Dot H^s + h^{s-1} Dot H^1
};

/// Weighted L^2 norm sqrt(L sum w(k)^2 |c_k|^2).
double weighted_norm(const SpectralField& f, const std::function<double(double)>& weight);

/// Fourier weight of the norm ||f||_{aX} = ||f||_X / a convention.
double sobolev_weight(double k, double s, double h, SobolevFlavor flavor);

double sobolev_norm(const SpectralField& f, double s, double h, SobolevFlavor flavor);

/// Weight of the sum space A + B with norm inf sqrt(|f1|_A^2 + |f2|_B^2).
double sum_weight(double wa, double wb);

}  // namespace holowave
