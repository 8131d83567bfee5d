#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "holowave/spectral.hpp"

namespace testing {

using holowave::complex;
using holowave::Grid;
using holowave::Parity;
using holowave::SpectralField;

/// Real field with random coefficients on |j| <= max_index, amplitude
/// decaying like 1/(1+j^2).
inline SpectralField random_real(const Grid& g, int max_index, unsigned seed,
                                 bool zero_mean = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  SpectralField f(g, Parity::Complex);
  for (int j = 0; j <= max_index; ++j) {
    double a = 1.0 / (1.0 + j * j);
    complex c(nd(rng) * a, j == 0 ? 0.0 : nd(rng) * a);
    f[g.slot_of_index(j)] = c;
    if (j > 0) f[g.slot_of_index(-j)] = std::conj(c);
  }
  if (zero_mean) f[0] = 0.0;
  return f.as_real();
}

inline SpectralField random_complex(const Grid& g, int max_index, unsigned seed) {
  return holowave::make_complex(random_real(g, max_index, seed),
                                random_real(g, max_index, seed + 7919));
}

inline SpectralField cosine(const Grid& g, int index, double amp = 1.0) {
  std::vector<double> v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = amp * std::cos(g.fundamental() * index * g.point(i));
  return SpectralField::from_samples(g, v);
}

inline SpectralField sine(const Grid& g, int index, double amp = 1.0) {
  std::vector<double> v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = amp * std::sin(g.fundamental() * index * g.point(i));
  return SpectralField::from_samples(g, v);
}

inline double max_diff(const SpectralField& a, const SpectralField& b) {
  return (a - b).max_abs();
}

inline double rel_l2(const SpectralField& a, const SpectralField& b) {
  double d = b.l2_norm();
  return (a - b).l2_norm() / (d > 0.0 ? d : 1.0);
}

}  // namespace testing
