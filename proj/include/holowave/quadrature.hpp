#pragma once

#include <vector>

namespace holowave {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// n-point Gauss-Lobatto rule on [-1, 1] (endpoints included, n >= 2).
QuadratureRule gauss_lobatto(int n);

/// Composite rule on [-depth, 0] with `panels` panels whose widths grow
/// geometrically away from 0, starting near `first_width`. Nodes are sorted
/// increasingly; Lobatto panels share their endpoints.
QuadratureRule panel_rule(double depth, int panels, int points, double first_width, bool lobatto);

}  // namespace holowave
