#include "holowave/spectral_field.hpp"

#include <cmath>

#include "holowave/errors.hpp"

namespace holowave {

SpectralField::SpectralField(Grid grid, Parity parity)
    : grid_(grid), coeffs_(grid.size(), complex{}), parity_(parity) {}

SpectralField::SpectralField(Grid grid, std::vector<complex> coeffs, Parity parity)
    : grid_(grid), coeffs_(std::move(coeffs)), parity_(parity) {
  if (static_cast<int>(coeffs_.size()) != grid_.size()) {
    throw GridMismatch("coefficient count does not match grid size");
  }
}

SpectralField SpectralField::from_samples(const Grid& grid, std::span<const double> values) {
  if (static_cast<int>(values.size()) != grid.size()) {
    throw GridMismatch("sample count does not match grid size");
  }
  SpectralField f(grid, fft::forward_real(values), Parity::Real);
  return f.as_real();
}

SpectralField SpectralField::from_samples(const Grid& grid, std::span<const complex> values) {
  if (static_cast<int>(values.size()) != grid.size()) {
    throw GridMismatch("sample count does not match grid size");
  }
  return SpectralField(grid, fft::forward(values), Parity::Complex);
}

SpectralField SpectralField::mode(const Grid& grid, int index, complex amplitude) {
  SpectralField f(grid, Parity::Complex);
  f.coeffs_[grid.slot_of_index(index)] = amplitude;
  return f;
}

std::vector<complex> SpectralField::samples() const { return fft::inverse(coeffs_); }

std::vector<double> SpectralField::real_samples() const {
  auto z = samples();
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

SpectralField SpectralField::real_part() const {
  if (is_real()) return *this;
  int n = size();
  SpectralField out(grid_, Parity::Real);
  for (int m = 0; m < n; ++m) {
    int mm = (n - m) % n;
    out.coeffs_[m] = 0.5 * (coeffs_[m] + std::conj(coeffs_[mm]));
  }
  return out;
}

SpectralField SpectralField::imag_part() const {
  int n = size();
  SpectralField out(grid_, Parity::Real);
  if (is_real()) return out;
  for (int m = 0; m < n; ++m) {
    int mm = (n - m) % n;
    out.coeffs_[m] = (coeffs_[m] - std::conj(coeffs_[mm])) / complex(0.0, 2.0);
  }
  return out;
}

SpectralField SpectralField::conj() const {
  if (is_real()) return *this;
  int n = size();
  SpectralField out(grid_, Parity::Complex);
  for (int m = 0; m < n; ++m) out.coeffs_[m] = std::conj(coeffs_[(n - m) % n]);
  return out;
}

SpectralField SpectralField::as_complex() const {
  SpectralField out = *this;
  out.parity_ = Parity::Complex;
  return out;
}

SpectralField SpectralField::as_real() const { return as_complex().real_part(); }

SpectralField SpectralField::derivative(int order) const {
  SpectralField out = *this;
  int n = size();
  for (int m = 0; m < n; ++m) {
    // The Nyquist mode has no well-defined odd derivative on a real grid.
    if (m == n / 2) {
      out.coeffs_[m] = order % 2 == 0 ? coeffs_[m] * std::pow(-1.0, order / 2) *
                                            std::pow(grid_.wavenumber(m), order)
                                      : complex{};
      continue;
    }
    complex ik(0.0, grid_.wavenumber(m));
    complex factor = 1.0;
    for (int p = 0; p < order; ++p) factor *= ik;
    out.coeffs_[m] = coeffs_[m] * factor;
  }
  return out;
}

SpectralField SpectralField::dealiased() const {
  SpectralField out = *this;
  out.dealias();
  return out;
}

void SpectralField::dealias() {
  for (int m = 0; m < size(); ++m) {
    if (!grid_.retained(m)) coeffs_[m] = complex{};
  }
}

SpectralField SpectralField::without_mean() const {
  SpectralField out = *this;
  out.coeffs_[0] = complex{};
  return out;
}

double SpectralField::l2_norm() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s * grid_.length());
}

complex SpectralField::evaluate(double alpha) const {
  // Sum c_j exp(i k_j alpha) with a rotation recurrence, reseeded every 64
  // steps to keep the phase error at roundoff.
  int n = size();
  double k1 = grid_.fundamental();
  complex sum = coeffs_[0];
  complex step = std::polar(1.0, k1 * alpha);
  complex e = 1.0;
  for (int j = 1; j < n / 2; ++j) {
    if (j % 64 == 0) {
      e = std::polar(1.0, k1 * alpha * j);
    } else {
      e *= step;
    }
    sum += coeffs_[j] * e + coeffs_[n - j] * std::conj(e);
  }
  // Nyquist: use the real cosine so real fields stay real off-grid.
  sum += coeffs_[n / 2] * std::cos(k1 * alpha * (n / 2));
  return sum;
}

std::vector<complex> SpectralField::evaluate(std::span<const double> alphas) const {
  std::vector<complex> out(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) out[i] = evaluate(alphas[i]);
  return out;
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& z : samples()) m = std::max(m, std::abs(z));
  return m;
}

double SpectralField::symmetry_defect() const {
  int n = size();
  double num = 0.0;
  double den = 0.0;
  for (int m = 0; m < n; ++m) {
    num += std::norm(coeffs_[m] - std::conj(coeffs_[(n - m) % n]));
    den += std::norm(coeffs_[m]);
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

void SpectralField::require_same_grid(const SpectralField& other) const {
  if (grid_ != other.grid_) throw GridMismatch("fields live on different grids");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(other);
  for (int m = 0; m < size(); ++m) coeffs_[m] += other.coeffs_[m];
  if (!other.is_real()) parity_ = Parity::Complex;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(other);
  for (int m = 0; m < size(); ++m) coeffs_[m] -= other.coeffs_[m];
  if (!other.is_real()) parity_ = Parity::Complex;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField& SpectralField::operator*=(complex s) {
  for (auto& c : coeffs_) c *= s;
  if (s.imag() != 0.0) parity_ = Parity::Complex;
  return *this;
}

SpectralField SpectralField::operator-() const {
  SpectralField out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

SpectralField multiply(const SpectralField& a, const SpectralField& b) {
  if (a.grid() != b.grid()) throw GridMismatch("fields live on different grids");
  auto sa = a.samples();
  auto sb = b.samples();
  for (std::size_t i = 0; i < sa.size(); ++i) sa[i] *= sb[i];
  bool real = a.is_real() && b.is_real();
  SpectralField out(a.grid(), fft::forward(sa), real ? Parity::Real : Parity::Complex);
  out.dealias();
  return real ? out.as_real() : out;
}

SpectralField times_i(const SpectralField& f) { return complex(0.0, 1.0) * f.as_complex(); }

SpectralField make_complex(const SpectralField& re, const SpectralField& im) {
  return re.as_complex() + times_i(im);
}

SpectralField resampled(const SpectralField& f, const Grid& target) {
  const Grid& g = f.grid();
  if (g.length() != target.length()) throw GridMismatch("resampling needs grids of equal length");
  SpectralField out(target, f.parity());
  const int n = g.size(), m = target.size();
  const int keep = std::min(n, m) / 2;
  for (int j = -keep + 1; j < keep; ++j) out[target.slot_of_index(j)] = f.at_index(j);
  if (m > n && n % 2 == 0) {
    complex ny = f[n / 2];
    out[target.slot_of_index(n / 2)] = 0.5 * ny;
    out[target.slot_of_index(-n / 2)] = 0.5 * ny;
  }
  return out;
}

}  // namespace holowave
