#include "boussinesq/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "boussinesq/p2.hpp"

namespace bouss {

namespace {

double quadratic_form(const SparseRowMatrix& k, const Eigen::VectorXd& v) {
  return std::max(0.0, v.dot(k * v));
}

void require_same(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string("b_norm_diff: ") + what + " size mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

const QuadratureRule& error_rule() {
  static const QuadratureRule rule = collapsed_gauss_rule(6);
  return rule;
}

}  // namespace

double b_norm_diff(const Discretization& disc, const State& s1, const State& s2, double nu,
                   double kappa) {
  require_same(s1.u, s2.u, "velocity");
  require_same(s1.T, s2.T, "temperature");
  if (s1.u.size() != disc.velocity_size() || s1.T.size() != disc.temperature_size()) {
    throw std::invalid_argument("b_norm_diff: state does not match the discretization");
  }
  const auto& k = disc.scalar_stiffness();
  const int n = disc.num_nodes();
  const Eigen::VectorXd du = s1.u - s2.u;
  const Eigen::VectorXd dt = s1.T - s2.T;
  const double gu = quadratic_form(k, du.head(n)) + quadratic_form(k, du.tail(n));
  const double gt = quadratic_form(k, dt);
  return std::sqrt(nu * gu + kappa * gt);
}

double gradient_norm(const Discretization& disc, const Eigen::VectorXd& coeffs) {
  const auto& k = disc.scalar_stiffness();
  const int n = disc.num_nodes();
  if (coeffs.size() == n) return std::sqrt(quadratic_form(k, coeffs));
  if (coeffs.size() == 2 * n) {
    return std::sqrt(quadratic_form(k, coeffs.head(n)) + quadratic_form(k, coeffs.tail(n)));
  }
  throw std::invalid_argument("gradient_norm: coefficient vector has unexpected size");
}

double divergence_norm(const Discretization& disc, const Eigen::VectorXd& u) {
  const int n = disc.num_nodes();
  if (u.size() != 2 * n) throw std::invalid_argument("divergence_norm: expected velocity coefficients");
  const auto& rule = disc.rule();
  double sum = 0.0;
  for (std::size_t t = 0; t < disc.mesh().num_triangles(); ++t) {
    const auto& geo = disc.geometry(t);
    const auto& nodes = disc.element_nodes(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& rg = disc.ref_gradients(q);
      double div = 0.0;
      for (int k = 0; k < 6; ++k) {
        const Eigen::Vector2d g = geo.inv_jt * Eigen::Vector2d(rg[k][0], rg[k][1]);
        div += u[nodes[k]] * g[0] + u[n + nodes[k]] * g[1];
      }
      sum += rule.weights[q] * geo.det * div * div;
    }
  }
  return std::sqrt(sum);
}

FieldErrors scalar_errors(const Discretization& disc, const Eigen::VectorXd& coeffs,
                          const ScalarField& exact, const GradientField& exact_grad) {
  const auto& rule = error_rule();
  double l2 = 0.0, h1 = 0.0;
  for (std::size_t t = 0; t < disc.mesh().num_triangles(); ++t) {
    const auto& geo = disc.geometry(t);
    const auto& nodes = disc.element_nodes(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto [xi, eta] = rule.points[q];
      const auto phi = p2::values(xi, eta);
      const auto rg = p2::gradients(xi, eta);
      double val = 0.0;
      Eigen::Vector2d grad = Eigen::Vector2d::Zero();
      for (int k = 0; k < 6; ++k) {
        val += coeffs[nodes[k]] * phi[k];
        grad += coeffs[nodes[k]] * (geo.inv_jt * Eigen::Vector2d(rg[k][0], rg[k][1]));
      }
      const Point x = disc.map_point(t, xi, eta);
      const double w = rule.weights[q] * geo.det;
      const auto eg = exact_grad(x);
      l2 += w * std::pow(val - exact(x), 2);
      h1 += w * (std::pow(grad[0] - eg[0], 2) + std::pow(grad[1] - eg[1], 2));
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

FieldErrors velocity_errors(const Discretization& disc, const Eigen::VectorXd& u,
                            const VectorField& exact, const VelocityGradientField& exact_grad) {
  const int n = disc.num_nodes();
  const Eigen::VectorXd ux = u.head(n), uy = u.tail(n);
  const auto ex = scalar_errors(
      disc, ux, [&](const Point& p) { return exact(p)[0]; },
      [&](const Point& p) {
        const auto g = exact_grad(p);
        return std::array<double, 2>{g[0], g[1]};
      });
  const auto ey = scalar_errors(
      disc, uy, [&](const Point& p) { return exact(p)[1]; },
      [&](const Point& p) {
        const auto g = exact_grad(p);
        return std::array<double, 2>{g[2], g[3]};
      });
  return {std::hypot(ex.l2, ey.l2), std::hypot(ex.h1, ey.h1)};
}

double pressure_error(const Discretization& disc, const Eigen::VectorXd& p, const ScalarField& exact) {
  const auto& rule = error_rule();
  double area = 0.0, mean_h = 0.0, mean_e = 0.0;
  for (std::size_t t = 0; t < disc.mesh().num_triangles(); ++t) {
    const double det = disc.geometry(t).det;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto [xi, eta] = rule.points[q];
      const auto psi = p2::p1_values(xi, eta);
      const double w = rule.weights[q] * det;
      area += w;
      mean_h += w * (p[3 * t] * psi[0] + p[3 * t + 1] * psi[1] + p[3 * t + 2] * psi[2]);
      mean_e += w * exact(disc.map_point(t, xi, eta));
    }
  }
  mean_h /= area;
  mean_e /= area;
  double sum = 0.0;
  for (std::size_t t = 0; t < disc.mesh().num_triangles(); ++t) {
    const double det = disc.geometry(t).det;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto [xi, eta] = rule.points[q];
      const auto psi = p2::p1_values(xi, eta);
      const double ph = p[3 * t] * psi[0] + p[3 * t + 1] * psi[1] + p[3 * t + 2] * psi[2] - mean_h;
      const double pe = exact(disc.map_point(t, xi, eta)) - mean_e;
      sum += rule.weights[q] * det * (ph - pe) * (ph - pe);
    }
  }
  return std::sqrt(sum);
}

}  // namespace bouss
