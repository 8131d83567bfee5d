#include "holowave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "holowave/errors.hpp"

namespace holowave {

namespace {

void check_beta(double beta, double h) {
  bool ok = beta <= 0.0 && std::isfinite(beta) &&
            (is_infinite_depth(h) || beta >= -h * (1.0 + 1e-14));
  if (!ok) throw OutOfStrip("beta = " + std::to_string(beta) + " lies outside the strip");
}

double coeff_norm(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs()) s += std::norm(c);
  return std::sqrt(s);
}

// Multiply by an odd imaginary symbol i*s(k); the Nyquist slot is dropped so
// real fields stay real.
SpectralField apply_odd(const SpectralField& f, const std::function<double(double)>& s) {
  SpectralField out = f;
  const Grid& g = f.grid();
  int n = g.size();
  for (int m = 0; m < n; ++m) {
    if (m == n / 2) {
      out[m] = complex{};
      continue;
    }
    out[m] = f[m] * complex(0.0, s(g.wavenumber(m)));
  }
  return out;
}

}  // namespace

double tanh_symbol(double k, double h) {
  if (is_infinite_depth(h)) return k > 0.0 ? 1.0 : (k < 0.0 ? -1.0 : 0.0);
  return std::tanh(h * k);
}

double neumann_symbol(double k, double beta, double h) {
  double a = std::abs(k);
  if (is_infinite_depth(h)) return std::exp(a * beta);
  return std::exp(a * beta) * (1.0 + std::exp(-2.0 * a * (beta + h))) /
         (1.0 + std::exp(-2.0 * a * h));
}

double dirichlet_symbol(double k, double beta, double h) {
  double a = std::abs(k);
  if (is_infinite_depth(h)) return std::exp(a * beta);
  if (a == 0.0) return (beta + h) / h;
  return std::exp(a * beta) * std::expm1(-2.0 * a * (beta + h)) / std::expm1(-2.0 * a * h);
}

SpectralField apply_symbol(const SpectralField& f, const std::function<double(double)>& symbol) {
  SpectralField out = f;
  const Grid& g = f.grid();
  for (int m = 0; m < g.size(); ++m) out[m] = f[m] * symbol(g.wavenumber(m));
  return out;
}

SpectralField tilbert(const SpectralField& f, double h) {
  return apply_odd(f, [h](double k) { return -tanh_symbol(k, h); });
}

SpectralField tilbert_inverse(const SpectralField& f, double h, double tol) {
  double norm = coeff_norm(f);
  if (std::abs(f.mean()) > tol * norm) {
    throw NonZeroMean("inverse Tilbert transform applied to a field with mean " +
                      std::to_string(std::abs(f.mean())));
  }
  return apply_odd(f, [h](double k) { return k == 0.0 ? 0.0 : 1.0 / tanh_symbol(k, h); });
}

SpectralField extend_neumann(const SpectralField& f, double beta, double h) {
  check_beta(beta, h);
  if (beta == 0.0) return f;
  return apply_symbol(f, [=](double k) { return neumann_symbol(k, beta, h); });
}

SpectralField extend_dirichlet(const SpectralField& f, double beta, double h) {
  check_beta(beta, h);
  if (beta == 0.0) return f;
  return apply_symbol(f, [=](double k) { return dirichlet_symbol(k, beta, h); });
}

SpectralField dtn_flat(const SpectralField& f, double h, Bottom which) {
  if (which == Bottom::Neumann) return tilbert(f.derivative(), h);
  if (std::abs(f.mean()) > 1e-12 * coeff_norm(f)) {
    throw NonZeroMean("Dirichlet-bottom DtN requires a mean-zero field");
  }
  return -tilbert_inverse(f.derivative(), h);
}

SpectralField project_holomorphic(const SpectralField& u, double h) {
  const Grid& g = u.grid();
  int n = g.size();
  SpectralField out(g, Parity::Complex);
  for (int m = 1; m < n; ++m) {
    int mm = n - m;
    complex r = 0.5 * (u[m] + std::conj(u[mm]));
    complex s = (u[m] - std::conj(u[mm])) / complex(0.0, 2.0);
    double t = tanh_symbol(g.wavenumber(m), h);
    out[m] = 0.5 * ((1.0 - t) * r + complex(0.0, 1.0) * (1.0 - 1.0 / t) * s);
  }
  out[0] = u[0].real();
  out[n / 2] = complex{};
  return out;
}

SpectralField holomorphic_from_real(const SpectralField& re, double h) {
  return make_complex(re.real_part(), -tilbert(re.real_part(), h));
}

double holomorphy_defect(const SpectralField& u, double h) {
  return (u.imag_part() + tilbert(u.real_part(), h)).l2_norm();
}

bool is_holomorphic(const SpectralField& u, double h, double tol) {
  return holomorphy_defect(u, h) <= tol * (u.l2_norm() + 1e-300);
}

SpectralField extend_holomorphic(const SpectralField& u, double beta, double h) {
  check_beta(beta, h);
  if (beta == 0.0) return u;
  const Grid& g = u.grid();
  int n = g.size();
  SpectralField out(g, Parity::Complex);
  for (int m = 0; m < n; ++m) {
    int mm = (n - m) % n;
    complex r = 0.5 * (u[m] + std::conj(u[mm]));
    complex s = (u[m] - std::conj(u[mm])) / complex(0.0, 2.0);
    double k = g.wavenumber(m);
    out[m] = neumann_symbol(k, beta, h) * r + complex(0.0, 1.0) * dirichlet_symbol(k, beta, h) * s;
  }
  return out;
}

double inner_product_hh(const SpectralField& u, const SpectralField& v, double h) {
  auto tu = tilbert(u.real_part(), h);
  auto tv = tilbert(v.real_part(), h);
  auto iu = u.imag_part();
  auto iv = v.imag_part();
  double s = 0.0;
  for (int m = 0; m < u.size(); ++m) {
    s += (tu[m] * std::conj(tv[m])).real() + (iu[m] * std::conj(iv[m])).real();
  }
  return s * u.grid().length();
}

// ---------------------------------------------------------------------------

LittlewoodPaley::LittlewoodPaley(const Grid& grid, double h) : grid_(grid) {
  lambda_low_ = std::max(is_infinite_depth(h) ? 0.0 : 1.0 / h, grid.fundamental());
  double kmax = grid.fundamental() * (grid.size() / 2);
  bands_ = 1;
  // Band j reaches down to lambda_low * 2^(j-1); stop once that exceeds kmax.
  while (lambda_low_ * std::ldexp(1.0, bands_ - 1) <= kmax) ++bands_;
}

double LittlewoodPaley::band_frequency(int j) const { return lambda_low_ * std::ldexp(1.0, j); }

int LittlewoodPaley::band_of(double lambda) const {
  for (int j = 0; j < bands_; ++j) {
    if (std::abs(band_frequency(j) - lambda) <= 1e-12 * lambda) return j;
  }
  throw InvalidArgument("frequency " + std::to_string(lambda) + " is not a dyadic band centre");
}

double LittlewoodPaley::cumulative(int j, double k) const {
  double a = std::abs(k);
  if (a <= lambda_low_ * std::ldexp(1.0, j)) return 1.0;
  double t = std::log2(a / lambda_low_) - j;
  if (t >= 1.0) return 0.0;
  double c = std::cos(0.5 * std::numbers::pi * t);
  return c * c;
}

double LittlewoodPaley::weight(int j, double k) const {
  if (j == 0) return cumulative(0, k);
  if (j == bands_ - 1) return 1.0 - cumulative(j - 1, k);
  return cumulative(j, k) - cumulative(j - 1, k);
}

SpectralField LittlewoodPaley::band(const SpectralField& f, int j) const {
  if (f.grid() != grid_) throw GridMismatch("field grid differs from the decomposition grid");
  if (j < 0 || j >= bands_) throw InvalidArgument("band index out of range");
  return apply_symbol(f, [this, j](double k) { return weight(j, k); });
}

std::vector<SpectralField> LittlewoodPaley::decompose(const SpectralField& f) const {
  std::vector<SpectralField> out;
  out.reserve(bands_);
  for (int j = 0; j < bands_; ++j) out.push_back(band(f, j));
  return out;
}

SpectralField band_filter(const SpectralField& f, double lambda, double h) {
  LittlewoodPaley lp(f.grid(), h);
  return lp.band(f, lp.band_of(lambda));
}

std::vector<SpectralField> lp_decompose(const SpectralField& f, double h) {
  return LittlewoodPaley(f.grid(), h).decompose(f);
}

// ---------------------------------------------------------------------------

double weighted_norm(const SpectralField& f, const std::function<double(double)>& weight) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (int m = 0; m < g.size(); ++m) {
    double w = weight(g.wavenumber(m));
    s += w * w * std::norm(f[m]);
  }
  return std::sqrt(s * g.length());
}

double sum_weight(double wa, double wb) {
  if (std::isinf(wa)) return wb;
  if (std::isinf(wb)) return wa;
  if (wa == 0.0 || wb == 0.0) return 0.0;
  return 1.0 / std::sqrt(1.0 / (wa * wa) + 1.0 / (wb * wb));
}

double sobolev_weight(double k, double s, double h, SobolevFlavor flavor) {
  double a = std::abs(k);
  // Homogeneous weights act on the mean-zero part only.
  double hom = a == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(a, s);
  switch (flavor) {
    case SobolevFlavor::Homogeneous:
      return hom;
    case SobolevFlavor::Inhomogeneous: {
      double low = is_infinite_depth(h) ? 0.0 : std::pow(h, -s);
      return std::max(hom, low);
    }
    case SobolevFlavor::HomogeneousDepth: {
      if (is_infinite_depth(h)) return hom;
      double grad = std::pow(h, 1.0 - s) * a;
      return sum_weight(hom, grad);
    }
  }
  return hom;
}

double sobolev_norm(const SpectralField& f, double s, double h, SobolevFlavor flavor) {
  return weighted_norm(f, [=](double k) { return sobolev_weight(k, s, h, flavor); });
}

}  // namespace holowave
