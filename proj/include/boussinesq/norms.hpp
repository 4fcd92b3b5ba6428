#pragma once

#include <array>
#include <functional>

#include "boussinesq/discretization.hpp"

namespace bouss {

/// sqrt(nu |grad(u1-u2)|^2 + kappa |grad(T1-T2)|^2). Pressure is ignored.
double b_norm_diff(const Discretization& disc, const State& s1, const State& s2, double nu,
                   double kappa);

/// L2 norm of the gradient of a scalar (size N) or velocity (size 2N) field.
double gradient_norm(const Discretization& disc, const Eigen::VectorXd& coeffs);

/// L2 norm of div u_h over the domain.
double divergence_norm(const Discretization& disc, const Eigen::VectorXd& u);

using GradientField = std::function<std::array<double, 2>(const Point&)>;
// Row-major velocity gradient: {du1/dx, du1/dy, du2/dx, du2/dy}.
using VelocityGradientField = std::function<std::array<double, 4>(const Point&)>;

struct FieldErrors {
  double l2 = 0.0;
  double h1 = 0.0;  // gradient (H1-seminorm) error
};

// Error norms against exact fields, integrated with a degree-10 rule.
FieldErrors scalar_errors(const Discretization& disc, const Eigen::VectorXd& coeffs,
                          const ScalarField& exact, const GradientField& exact_grad);
FieldErrors velocity_errors(const Discretization& disc, const Eigen::VectorXd& u,
                            const VectorField& exact, const VelocityGradientField& exact_grad);
/// L2 error of the discontinuous P1 pressure after removing both means.
double pressure_error(const Discretization& disc, const Eigen::VectorXd& p, const ScalarField& exact);

}  // namespace bouss
