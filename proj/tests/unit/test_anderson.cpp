#include <gtest/gtest.h>

#include <random>

#include "boussinesq/anderson.hpp"

using namespace bouss;

namespace {

Eigen::SparseMatrix<double, Eigen::RowMajor> identity(int n) {
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(n, n);
  m.setIdentity();
  return m;
}

Eigen::VectorXd random_vector(int n, std::mt19937& rng) {
  std::normal_distribution<double> d;
  Eigen::VectorXd v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST(AAHistory, WindowEvictsOldest) {
  AAHistory h(2, identity(3));
  for (int i = 0; i < 5; ++i) h.push(Eigen::Vector3d::Constant(i), Eigen::Vector3d::Constant(2 * i));
  EXPECT_EQ(h.size(), 3);
  EXPECT_EQ(h.x(0)[0], 2.0);
  EXPECT_EQ(h.update(2)[0], 4.0);
  // Gram matrix stays consistent after eviction
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(h.gram()(i, j), h.update(i).dot(h.update(j)));
}

TEST(AAHistory, RejectsBadInput) {
  EXPECT_THROW(AAHistory(-1, identity(2)), std::invalid_argument);
  AAHistory h(1, identity(2));
  EXPECT_THROW(h.push(Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()), std::invalid_argument);
}

TEST(AAHistory, UsesMetric) {
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(2, 2);
  m.insert(0, 0) = 2.0;
  m.insert(1, 1) = 3.0;
  AAHistory h(1, m);
  h.push(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
  EXPECT_DOUBLE_EQ(h.gram()(0, 0), 5.0);
}

TEST(Anderson, DepthOneClosedForm) {
  std::mt19937 rng(3);
  AAHistory h(1, identity(6));
  const Eigen::VectorXd x0 = random_vector(6, rng), g0 = random_vector(6, rng);
  const Eigen::VectorXd x1 = random_vector(6, rng), g1 = random_vector(6, rng);
  h.push(x0, g0);
  h.push(x1, g1);
  const Eigen::VectorXd w0 = g0 - x0, w1 = g1 - x1;
  // minimize |w1 + a (w0 - w1)|
  const double a = w1.dot(w1 - w0) / (w1 - w0).squaredNorm();
  const auto c = anderson_coefficients(h);
  ASSERT_EQ(c.alpha.size(), 1);
  EXPECT_NEAR(c.alpha[0], a, 1e-12);
  EXPECT_NEAR(c.objective, ((1 - a) * w1 + a * w0).norm(), 1e-12);
  const Eigen::VectorXd mixed = anderson_mix(h, 1);
  EXPECT_LT((mixed - ((1 - a) * g1 + a * g0)).norm(), 1e-12);
}

TEST(Anderson, DepthZeroReturnsImage) {
  AAHistory h(0, identity(2));
  h.push(Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4));
  EXPECT_EQ(anderson_mix(h, 0), Eigen::Vector2d(3, 4));
  h.push(Eigen::Vector2d(5, 6), Eigen::Vector2d(7, 8));
  EXPECT_EQ(h.size(), 1);
  EXPECT_EQ(anderson_mix(h, 0), Eigen::Vector2d(7, 8));
}

TEST(Anderson, SingleEntryReturnsImage) {
  AAHistory h(3, identity(2));
  h.push(Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4));
  EXPECT_EQ(anderson_mix(h, 3), Eigen::Vector2d(3, 4));
  EXPECT_THROW(anderson_coefficients(h), std::invalid_argument);
}

TEST(Anderson, IdenticalUpdatesGiveZeroAlpha) {
  AAHistory h(1, identity(3));
  h.push(Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 2, 3));
  h.push(Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(2, 3, 4));
  const auto c = anderson_coefficients(h);
  EXPECT_EQ(c.alpha[0], 0.0);
  EXPECT_EQ(anderson_mix(h, 1), Eigen::Vector3d(2, 3, 4));
}

TEST(Anderson, ObjectiveNeverExceedsNewestUpdate) {
  std::mt19937 rng(17);
  for (int m : {1, 2, 3, 5}) {
    AAHistory h(m, identity(8));
    for (int k = 0; k < 12; ++k) {
      h.push(random_vector(8, rng), random_vector(8, rng));
      if (h.size() < 2) continue;
      const auto c = anderson_coefficients(h);
      EXPECT_LE(c.objective, h.update(h.size() - 1).norm() * (1 + 1e-12));
      EXPECT_NEAR(mixing_weights(c).sum(), 1.0, 1e-14);
      // objective is the norm of the mixed update
      Eigen::VectorXd r = Eigen::VectorXd::Zero(8);
      const auto beta = mixing_weights(c);
      for (int j = 0; j < h.size(); ++j) r += beta[j] * h.update(j);
      EXPECT_NEAR(c.objective, r.norm(), 1e-9 * (1 + r.norm()));
    }
  }
}

TEST(Anderson, LeastSquaresOptimality) {
  // the residual of the optimum is orthogonal to every difference w_j - w_k
  std::mt19937 rng(5);
  AAHistory h(3, identity(10));
  for (int k = 0; k < 4; ++k) h.push(random_vector(10, rng), random_vector(10, rng));
  const auto c = anderson_coefficients(h);
  const auto beta = mixing_weights(c);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(10);
  for (int j = 0; j < 4; ++j) r += beta[j] * h.update(j);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(r.dot(h.update(j) - h.update(3)), 0.0, 1e-10);
}

TEST(Anderson, CollinearHistoryIsPruned) {
  AAHistory h(2, identity(3));
  const Eigen::Vector3d w(1, -2, 0.5);
  h.push(Eigen::Vector3d::Zero(), w);
  h.push(Eigen::Vector3d::Zero(), 2 * w);
  h.push(Eigen::Vector3d::Zero(), 3 * w);
  // differences w_j - w_2 are collinear; the oldest column goes
  const auto c = anderson_coefficients(h);
  EXPECT_GE(c.pruned, 1);
  EXPECT_EQ(c.alpha[0], 0.0);
  EXPECT_NEAR(c.objective, 0.0, 1e-12);
}

TEST(Anderson, LinearProblemExactInOneStep) {
  // g(x) = b for every x: any mixing of the images returns b
  AAHistory h(1, identity(3));
  const Eigen::Vector3d b(1, 2, 3);
  h.push(Eigen::Vector3d(0, 0, 0), b);
  h.push(Eigen::Vector3d(4, -1, 2), b);
  EXPECT_LT((anderson_mix(h, 1) - b).norm(), 1e-14);
}
