#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace holowave {

using complex = std::complex<double>;

/// Uniform periodic grid of N points on [0, L).
///
/// Coefficient slot m holds the wavenumber index j = m for m <= N/2 and
/// j = m - N above, so the represented indices are {-N/2+1, ..., N/2} and
/// k_j = 2*pi*j/L.
class Grid {
 public:
  Grid(int n, double length);

  int size() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }
  double fundamental() const;  // 2*pi/L

  int index_of_slot(int slot) const { return slot <= n_ / 2 ? slot : slot - n_; }
  int slot_of_index(int index) const { return index >= 0 ? index : index + n_; }
  double wavenumber(int slot) const { return fundamental() * index_of_slot(slot); }
  double point(int i) const { return spacing() * i; }

  /// Largest |index| retained by the 2/3 rule.
  int dealias_cutoff() const { return n_ / 3; }
  bool retained(int slot) const;

  std::vector<double> points() const;
  std::vector<double> wavenumbers() const;

  bool operator==(const Grid& other) const {
    return n_ == other.n_ && length_ == other.length_;
  }
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  int n_;
  double length_;
};

namespace fft {

/// Normalised forward transform: out_m = (1/N) sum_n in_n exp(-i k_m x_n).
void forward(std::span<const complex> in, std::span<complex> out);
/// Synthesis: out_n = sum_m in_m exp(i k_m x_n).
void inverse(std::span<const complex> in, std::span<complex> out);

std::vector<complex> forward(std::span<const complex> in);
std::vector<complex> forward_real(std::span<const double> in);
std::vector<complex> inverse(std::span<const complex> in);

}  // namespace fft

}  // namespace holowave
