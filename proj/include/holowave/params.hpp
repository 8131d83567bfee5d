#pragma once

#include <cmath>
#include <limits>

namespace holowave {

/// Depth value standing for an infinitely deep fluid.
inline constexpr double kInfiniteDepth = std::numeric_limits<double>::infinity();

inline bool is_infinite_depth(double h) { return std::isinf(h) && h > 0.0; }

/// Gravity g, surface tension kappa and depth h of the fluid layer.
class PhysicalParams {
 public:
  PhysicalParams(double g, double kappa, double h);

  double g() const { return g_; }
  double kappa() const { return kappa_; }
  double h() const { return h_; }
  bool infinite_depth() const { return is_infinite_depth(h_); }

  /// Capillary threshold frequency sqrt(g/kappa); infinite for kappa = 0.
  double lambda0() const;
  /// Bond number kappa/(g h^2); zero in infinite depth.
  double bond() const;
  bool small_bond(double threshold = 0.1) const { return bond() < threshold; }

  bool operator==(const PhysicalParams&) const = default;

 private:
  double g_;
  double kappa_;
  double h_;
};

}  // namespace holowave
