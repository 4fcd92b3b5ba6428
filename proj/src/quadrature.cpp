#include "boussinesq/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace bouss {

QuadratureRule gauss7_rule() {
  const double s15 = std::sqrt(15.0);
  const double a1 = (6.0 - s15) / 21.0;
  const double a2 = (6.0 + s15) / 21.0;
  const double w1 = (155.0 - s15) / 2400.0;
  const double w2 = (155.0 + s15) / 2400.0;
  const double b1 = 1.0 - 2.0 * a1;
  const double b2 = 1.0 - 2.0 * a2;

  QuadratureRule r;
  r.degree = 5;
  r.points = {{1.0 / 3.0, 1.0 / 3.0}, {a1, a1}, {b1, a1}, {a1, b1},
              {a2, a2},               {b2, a2}, {a2, b2}};
  r.weights = {9.0 / 80.0, w1, w1, w1, w2, w2, w2};
  return r;
}

namespace {

// Full Gauss-Legendre nodes/weights on [0,1].
template <int N>
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  std::vector<double> nodes, weights;
  for (std::size_t i = 0; i < x.size(); ++i) {
    nodes.push_back(0.5 * (1.0 + x[i]));
    weights.push_back(0.5 * w[i]);
    if (x[i] != 0.0) {
      nodes.push_back(0.5 * (1.0 - x[i]));
      weights.push_back(0.5 * w[i]);
    }
  }
  return {nodes, weights};
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit(int n) {
  switch (n) {
    case 2: return gauss_legendre_unit<2>();
    case 3: return gauss_legendre_unit<3>();
    case 4: return gauss_legendre_unit<4>();
    case 5: return gauss_legendre_unit<5>();
    case 6: return gauss_legendre_unit<6>();
    case 7: return gauss_legendre_unit<7>();
    case 8: return gauss_legendre_unit<8>();
    case 9: return gauss_legendre_unit<9>();
    case 10: return gauss_legendre_unit<10>();
    default: throw std::invalid_argument("collapsed_gauss_rule: unsupported n=" + std::to_string(n));
  }
}

}  // namespace

QuadratureRule collapsed_gauss_rule(int n) {
  const auto [x, w] = gauss_legendre_unit(n);
  QuadratureRule r;
  r.degree = 2 * n - 2;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      // Duffy map (s,t) -> (s, t(1-s)).
      r.points.push_back({x[i], x[j] * (1.0 - x[i])});
      r.weights.push_back(w[i] * w[j] * (1.0 - x[i]));
    }
  }
  return r;
}

}  // namespace bouss
