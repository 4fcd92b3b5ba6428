#pragma once

#include <array>

namespace bouss::p2 {

// Local node order: vertices 0,1,2 then midpoints of edges (0,1), (1,2), (2,0).
inline constexpr int kNodes = 6;

inline std::array<double, 6> values(double xi, double eta) {
  const double l0 = 1.0 - xi - eta, l1 = xi, l2 = eta;
  return {l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),
          4.0 * l0 * l1,         4.0 * l1 * l2,         4.0 * l2 * l0};
}

/// Reference gradients d/dxi, d/deta.
inline std::array<std::array<double, 2>, 6> gradients(double xi, double eta) {
  const double l0 = 1.0 - xi - eta, l1 = xi, l2 = eta;
  // dl0 = (-1,-1), dl1 = (1,0), dl2 = (0,1)
  return {{{-(4.0 * l0 - 1.0), -(4.0 * l0 - 1.0)},
           {4.0 * l1 - 1.0, 0.0},
           {0.0, 4.0 * l2 - 1.0},
           {4.0 * (l0 - l1), -4.0 * l1},
           {4.0 * l2, 4.0 * l1},
           {-4.0 * l2, 4.0 * (l0 - l2)}}};
}

/// Discontinuous P1 basis on one triangle: the barycentric coordinates.
inline std::array<double, 3> p1_values(double xi, double eta) {
  return {1.0 - xi - eta, xi, eta};
}

}  // namespace bouss::p2
