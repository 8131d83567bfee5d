#include "holowave/params.hpp"

#include "holowave/errors.hpp"

namespace holowave {

PhysicalParams::PhysicalParams(double g, double kappa, double h) : g_(g), kappa_(kappa), h_(h) {
  if (!(g > 0.0) || !std::isfinite(g)) throw InvalidArgument("gravity must be positive");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw InvalidArgument("surface tension must be non-negative");
  }
  if (!(h > 0.0) || std::isnan(h)) throw InvalidArgument("depth must be positive or infinite");
}

double PhysicalParams::lambda0() const {
  if (kappa_ == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(g_ / kappa_);
}

double PhysicalParams::bond() const {
  if (infinite_depth()) return 0.0;
  return kappa_ / (g_ * h_ * h_);
}

}  // namespace holowave
