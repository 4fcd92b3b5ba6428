#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "boussinesq/norms.hpp"

using namespace bouss;

namespace {

std::shared_ptr<const Mesh> square(int n) {
  return std::make_shared<const Mesh>(barycentric_refine(generate_unit_square_mesh(n)));
}

}  // namespace

TEST(GradientNorm, QuadraticExact) {
  const Discretization disc(square(3));
  // grad (x^2 + y) = (2x, 1); |.|^2 integrates to 4/3 + 1
  const auto t = disc.interpolate([](const Point& p) { return p.x * p.x + p.y; });
  EXPECT_NEAR(gradient_norm(disc, t), std::sqrt(4.0 / 3.0 + 1.0), 1e-13);
  const auto u = disc.interpolate(VectorField([](const Point& p) { return std::array<double, 2>{p.y, 2 * p.x}; }));
  EXPECT_NEAR(gradient_norm(disc, u), std::sqrt(5.0), 1e-13);
}

TEST(BNorm, WeightsVelocityAndTemperature) {
  const Discretization disc(square(2));
  State a = State::zeros(disc), b = State::zeros(disc);
  b.u = disc.interpolate(VectorField([](const Point& p) { return std::array<double, 2>{p.x, 0.0}; }));
  b.T = disc.interpolate([](const Point& p) { return 2 * p.y; });
  b.p.setConstant(100.0);  // ignored
  EXPECT_NEAR(b_norm_diff(disc, a, b, 0.1, 0.3), std::sqrt(0.1 * 1.0 + 0.3 * 4.0), 1e-13);
  EXPECT_EQ(b_norm_diff(disc, b, b, 0.1, 0.3), 0.0);
}

TEST(BNorm, SizeMismatchThrows) {
  const Discretization disc(square(2));
  State a = State::zeros(disc), b = State::zeros(disc);
  b.T.resize(3);
  EXPECT_THROW(b_norm_diff(disc, a, b, 0.1, 0.1), std::invalid_argument);
}

TEST(DivergenceNorm, KnownFields) {
  const Discretization disc(square(3));
  const auto sol = disc.interpolate(VectorField([](const Point& p) { return std::array<double, 2>{p.x * p.x, -2 * p.x * p.y}; }));
  EXPECT_LT(divergence_norm(disc, sol), 1e-13);
  const auto lin = disc.interpolate(VectorField([](const Point& p) { return std::array<double, 2>{p.x, p.y}; }));
  EXPECT_NEAR(divergence_norm(disc, lin), 2.0, 1e-13);
}

TEST(ErrorNorms, InterpolantOfQuadraticIsExact) {
  const Discretization disc(square(2));
  auto f = [](const Point& p) { return p.x * p.y + p.y * p.y; };
  auto g = [](const Point& p) { return std::array<double, 2>{p.y, p.x + 2 * p.y}; };
  const auto e = scalar_errors(disc, disc.interpolate(f), f, g);
  EXPECT_LT(e.l2, 1e-14);
  EXPECT_LT(e.h1, 1e-13);
}

TEST(ErrorNorms, ConstantOffset) {
  const Discretization disc(square(2));
  auto f = [](const Point& p) { return p.x; };
  auto g = [](const Point&) { return std::array<double, 2>{1.0, 0.0}; };
  Eigen::VectorXd c = disc.interpolate(f);
  c.array() += 0.25;
  const auto e = scalar_errors(disc, c, f, g);
  EXPECT_NEAR(e.l2, 0.25, 1e-14);
  EXPECT_LT(e.h1, 1e-13);
}

TEST(ErrorNorms, SmoothFieldConvergesAtOrderThreeInL2) {
  using std::numbers::pi;
  auto f = [](const Point& p) { return std::sin(pi * p.x) * std::sin(pi * p.y); };
  auto g = [](const Point& p) {
    return std::array<double, 2>{pi * std::cos(pi * p.x) * std::sin(pi * p.y), pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
  };
  const Discretization d1(square(4)), d2(square(8));
  const auto e1 = scalar_errors(d1, d1.interpolate(f), f, g);
  const auto e2 = scalar_errors(d2, d2.interpolate(f), f, g);
  EXPECT_NEAR(std::log2(e1.l2 / e2.l2), 3.0, 0.2);
  EXPECT_NEAR(std::log2(e1.h1 / e2.h1), 2.0, 0.2);
}

TEST(ErrorNorms, VelocityComponents) {
  const Discretization disc(square(2));
  auto u = [](const Point& p) { return std::array<double, 2>{p.x * p.x, p.y}; };
  auto gu = [](const Point& p) { return std::array<double, 4>{2 * p.x, 0.0, 0.0, 1.0}; };
  Eigen::VectorXd c = disc.interpolate(VectorField(u));
  auto e = velocity_errors(disc, c, u, gu);
  EXPECT_LT(e.l2, 1e-14);
  EXPECT_LT(e.h1, 1e-13);
  c.tail(disc.num_nodes()).array() += 1.0;  // shift u_y
  e = velocity_errors(disc, c, u, gu);
  EXPECT_NEAR(e.l2, 1.0, 1e-13);
}

TEST(PressureError, IgnoresMeans) {
  const Discretization disc(square(2));
  auto p = [](const Point& x) { return x.x - 2 * x.y; };
  Eigen::VectorXd c = disc.project_pressure(p);
  EXPECT_LT(pressure_error(disc, c, p), 1e-13);
  c.array() += 5.0;
  EXPECT_LT(pressure_error(disc, c, p), 1e-13);
}
