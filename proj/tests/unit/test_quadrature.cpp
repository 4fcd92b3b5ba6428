#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "boussinesq/p2.hpp"
#include "boussinesq/quadrature.hpp"

using namespace bouss;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Exact integral of xi^a eta^b over the reference triangle.
double monomial_integral(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

double apply(const QuadratureRule& r, int a, int b) {
  double s = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q][0], a) * std::pow(r.points[q][1], b);
  return s;
}

}  // namespace

TEST(Gauss7, ExactThroughDegreeFive) {
  const auto r = gauss7_rule();
  EXPECT_EQ(r.size(), 7u);
  EXPECT_EQ(r.degree, 5);
  for (int d = 0; d <= 5; ++d)
    for (int a = 0; a <= d; ++a) EXPECT_NEAR(apply(r, a, d - a), monomial_integral(a, d - a), 1e-15) << a << "," << d - a;
}

TEST(Gauss7, NotExactAtDegreeSix) {
  const auto r = gauss7_rule();
  double worst = 0.0;
  for (int a = 0; a <= 6; ++a) worst = std::max(worst, std::abs(apply(r, a, 6 - a) - monomial_integral(a, 6 - a)));
  EXPECT_GT(worst, 1e-8);
}

TEST(Gauss7, PointsInsideWeightsPositive) {
  const auto r = gauss7_rule();
  EXPECT_NEAR(std::accumulate(r.weights.begin(), r.weights.end(), 0.0), 0.5, 1e-15);
  for (std::size_t q = 0; q < r.size(); ++q) {
    EXPECT_GT(r.weights[q], 0.0);
    EXPECT_GT(r.points[q][0], 0.0);
    EXPECT_GT(r.points[q][1], 0.0);
    EXPECT_LT(r.points[q][0] + r.points[q][1], 1.0);
  }
}

class CollapsedRule : public ::testing::TestWithParam<int> {};

TEST_P(CollapsedRule, ExactToDegree2nMinus2) {
  const int n = GetParam();
  const auto r = collapsed_gauss_rule(n);
  EXPECT_EQ(r.degree, 2 * n - 2);
  for (int d = 0; d <= 2 * n - 2; ++d)
    for (int a = 0; a <= d; ++a)
      EXPECT_NEAR(apply(r, a, d - a), monomial_integral(a, d - a), 1e-14 * monomial_integral(a, d - a) + 1e-17);
}

// Doubling check: a degree-(2n-2) rule agrees with a much finer one on smooth
// non-polynomial integrands to high accuracy.
TEST_P(CollapsedRule, AgreesWithFinerRuleOnSmoothFunction) {
  const int n = GetParam();
  auto integrate = [](const QuadratureRule& r) {
    double s = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::exp(r.points[q][0] - 2 * r.points[q][1]);
    return s;
  };
  const double coarse = integrate(collapsed_gauss_rule(n));
  const double fine = integrate(collapsed_gauss_rule(10));
  EXPECT_NEAR(coarse, fine, n >= 6 ? 1e-9 : n == 5 ? 1e-8 : 1e-2);
}

INSTANTIATE_TEST_SUITE_P(Orders, CollapsedRule, ::testing::Values(2, 3, 4, 5, 6, 8, 10));

TEST(CollapsedRule, RejectsUnsupported) {
  EXPECT_THROW(collapsed_gauss_rule(1), std::invalid_argument);
  EXPECT_THROW(collapsed_gauss_rule(11), std::invalid_argument);
}

namespace {
const double kNodes[6][2] = {{0, 0}, {1, 0}, {0, 1}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}};
}

TEST(P2Basis, KroneckerAtNodes) {
  for (int j = 0; j < 6; ++j) {
    const auto v = p2::values(kNodes[j][0], kNodes[j][1]);
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(v[i], i == j ? 1.0 : 0.0, 1e-15) << i << " at node " << j;
  }
}

TEST(P2Basis, PartitionOfUnity) {
  for (double xi : {0.1, 0.3, 0.6})
    for (double eta : {0.05, 0.2}) {
      const auto v = p2::values(xi, eta);
      const auto g = p2::gradients(xi, eta);
      double s = 0, gx = 0, gy = 0;
      for (int i = 0; i < 6; ++i) {
        s += v[i];
        gx += g[i][0];
        gy += g[i][1];
      }
      EXPECT_NEAR(s, 1.0, 1e-15);
      EXPECT_NEAR(gx, 0.0, 1e-14);
      EXPECT_NEAR(gy, 0.0, 1e-14);
    }
}

TEST(P2Basis, GradientsMatchFiniteDifferences) {
  const double h = 1e-6;
  for (double xi : {0.15, 0.4})
    for (double eta : {0.1, 0.35}) {
      const auto g = p2::gradients(xi, eta);
      const auto px = p2::values(xi + h, eta), mx = p2::values(xi - h, eta);
      const auto py = p2::values(xi, eta + h), my = p2::values(xi, eta - h);
      for (int i = 0; i < 6; ++i) {
        EXPECT_NEAR(g[i][0], (px[i] - mx[i]) / (2 * h), 1e-8) << "basis " << i;
        EXPECT_NEAR(g[i][1], (py[i] - my[i]) / (2 * h), 1e-8) << "basis " << i;
      }
    }
}

TEST(P1Basis, BarycentricCoordinates) {
  const auto v = p2::p1_values(0.2, 0.3);
  EXPECT_DOUBLE_EQ(v[0], 0.5);
  EXPECT_DOUBLE_EQ(v[1], 0.2);
  EXPECT_DOUBLE_EQ(v[2], 0.3);
}
