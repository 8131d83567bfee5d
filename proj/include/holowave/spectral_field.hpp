#pragma once

#include <complex>
#include <span>
#include <vector>

#include "holowave/grid.hpp"

namespace holowave {

enum class Parity { Real, Complex };

/// A periodic function stored by its Fourier coefficients on a Grid.
///
/// Real-tagged fields keep conjugate symmetry c(-k) = conj(c(k)); operations
/// that could break it (complex scaling, mixing with complex fields) return
/// complex-tagged results.
class SpectralField {
 public:
  explicit SpectralField(Grid grid, Parity parity = Parity::Complex);
  SpectralField(Grid grid, std::vector<complex> coeffs, Parity parity);

  static SpectralField from_samples(const Grid& grid, std::span<const double> values);
  static SpectralField from_samples(const Grid& grid, std::span<const complex> values);
  /// Single Fourier mode amplitude * exp(i k_j alpha), complex-tagged.
  static SpectralField mode(const Grid& grid, int index, complex amplitude);

  const Grid& grid() const { return grid_; }
  Parity parity() const { return parity_; }
  bool is_real() const { return parity_ == Parity::Real; }
  int size() const { return grid_.size(); }

  std::span<const complex> coeffs() const { return coeffs_; }
  std::span<complex> coeffs() { return coeffs_; }
  complex& operator[](int slot) { return coeffs_[slot]; }
  const complex& operator[](int slot) const { return coeffs_[slot]; }
  /// Coefficient by signed wavenumber index.
  complex at_index(int index) const { return coeffs_[grid_.slot_of_index(index)]; }

  std::vector<complex> samples() const;
  std::vector<double> real_samples() const;

  SpectralField real_part() const;
  SpectralField imag_part() const;
  SpectralField conj() const;
  SpectralField as_complex() const;
  /// Retag as real after symmetrising the coefficients.
  SpectralField as_real() const;

  SpectralField derivative(int order = 1) const;
  /// Zero every slot above the 2/3 cutoff (and the Nyquist slot).
  SpectralField dealiased() const;
  void dealias();

  complex mean() const { return coeffs_[0]; }
  SpectralField without_mean() const;
  double l2_norm() const;
  /// Trapezoid (= exact spectral) quadrature of the samples over one period.
  complex integral() const { return coeffs_[0] * grid_.length(); }
  /// Trigonometric interpolation at an arbitrary point.
  complex evaluate(double alpha) const;
  std::vector<complex> evaluate(std::span<const double> alphas) const;
  double max_abs() const;

  /// Conjugate-symmetry defect relative to the coefficient norm.
  double symmetry_defect() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
  SpectralField& operator*=(complex s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(complex s, SpectralField a) { return a *= s; }
  SpectralField operator-() const;

 private:
  void require_same_grid(const SpectralField& other) const;

  Grid grid_;
  std::vector<complex> coeffs_;
  Parity parity_;
};

/// Pointwise product followed by 2/3-rule dealiasing.
SpectralField multiply(const SpectralField& a, const SpectralField& b);

/// Build i * f as a complex field.
SpectralField times_i(const SpectralField& f);

/// Same function on another grid of equal length: modes are copied, cut off
/// (coarser grid) or zero-padded (finer grid); a source Nyquist mode is split
/// evenly between +-N/2 when padding.
SpectralField resampled(const SpectralField& f, const Grid& target);

/// Compose real and imaginary parts into a complex field: re + i*im.
SpectralField make_complex(const SpectralField& re, const SpectralField& im);

}  // namespace holowave
