#pragma once

#include <array>
#include <vector>

namespace bouss {

/// Quadrature on the reference triangle (0,0)-(1,0)-(0,1).
/// Weights sum to the reference area 1/2.
struct QuadratureRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Symmetric 7-point Gauss rule, exact for polynomials of degree 5.
QuadratureRule gauss7_rule();

/// Conical-product (collapsed Gauss-Legendre) rule with n points per
/// direction, exact to degree 2n-2. Supported n: 2..10.
QuadratureRule collapsed_gauss_rule(int n);

}  // namespace bouss
