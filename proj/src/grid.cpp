#include "holowave/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "holowave/errors.hpp"

namespace holowave {

Grid::Grid(int n, double length) : n_(n), length_(length) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw InvalidArgument("grid size must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidArgument("grid length must be positive and finite");
  }
}

double Grid::fundamental() const { return 2.0 * std::numbers::pi / length_; }

bool Grid::retained(int slot) const {
  if (slot == n_ / 2) return false;
  int j = index_of_slot(slot);
  return std::abs(j) <= dealias_cutoff();
}

std::vector<double> Grid::points() const {
  std::vector<double> x(n_);
  for (int i = 0; i < n_; ++i) x[i] = point(i);
  return x;
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> k(n_);
  for (int m = 0; m < n_; ++m) k[m] = wavenumber(m);
  return k;
}

namespace fft {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// Planning is not thread-safe in FFTW; execution with the new-array
// interface is. Plans live for the lifetime of the process.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    auto* a = fftw_alloc_complex(n);
    auto* b = fftw_alloc_complex(n);
    PlanPair p;
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.forward = fftw_plan_dft_1d(n, a, b, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_1d(n, a, b, FFTW_BACKWARD, flags);
    fftw_free(a);
    fftw_free(b);
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

fftw_complex* as_fftw(complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void forward(std::span<const complex> in, std::span<complex> out) {
  int n = static_cast<int>(in.size());
  auto plans = PlanCache::instance().get(n);
  if (in.data() == out.data()) {
    std::vector<complex> tmp(in.begin(), in.end());
    fftw_execute_dft(plans.forward, as_fftw(tmp.data()), as_fftw(out.data()));
  } else {
    fftw_execute_dft(plans.forward, as_fftw(const_cast<complex*>(in.data())),
                     as_fftw(out.data()));
  }
  double scale = 1.0 / n;
  for (auto& c : out) c *= scale;
}

void inverse(std::span<const complex> in, std::span<complex> out) {
  int n = static_cast<int>(in.size());
  auto plans = PlanCache::instance().get(n);
  if (in.data() == out.data()) {
    std::vector<complex> tmp(in.begin(), in.end());
    fftw_execute_dft(plans.backward, as_fftw(tmp.data()), as_fftw(out.data()));
  } else {
    fftw_execute_dft(plans.backward, as_fftw(const_cast<complex*>(in.data())),
                     as_fftw(out.data()));
  }
}

std::vector<complex> forward(std::span<const complex> in) {
  std::vector<complex> out(in.size());
  forward(in, out);
  return out;
}

std::vector<complex> forward_real(std::span<const double> in) {
  std::vector<complex> tmp(in.begin(), in.end());
  forward(tmp, tmp);
  return tmp;
}

std::vector<complex> inverse(std::span<const complex> in) {
  std::vector<complex> out(in.size());
  inverse(in, out);
  return out;
}

}  // namespace fft
}  // namespace holowave
