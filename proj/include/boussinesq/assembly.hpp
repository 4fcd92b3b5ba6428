#pragma once

#include <utility>

#include "boussinesq/discretization.hpp"

namespace bouss {

/// Sparse operator between two of the function spaces. No stored zeros.
struct AssembledOperator {
  Space rows = Space::velocity;
  Space cols = Space::velocity;
  SparseRowMatrix matrix;
};

/// coeff * (grad phi_j, grad phi_i); block diagonal for velocity.
AssembledOperator assemble_diffusion(const Discretization& disc, Space space, double coeff);

/// (phi_j, phi_i); block diagonal for velocity.
AssembledOperator assemble_mass(const Discretization& disc, Space space);

/// B[i,j] = -(div phi_j, psi_i): pressure rows, velocity columns.
AssembledOperator assemble_divergence(const Discretization& disc);

/// N[i,j] = b(a, phi_j, phi_i) with the skew-symmetrized trilinear form
///   b(a, v, w) = (a . grad v, w) + 1/2 ((div a) v, w).
/// The same scalar form serves the temperature equation; for velocity it is
/// applied componentwise. `a` holds velocity coefficients.
AssembledOperator assemble_skew_convection(const Discretization& disc, const Eigen::VectorXd& a,
                                           Space target);

/// Newton linearization terms with the advecting slot free:
///   first  = R_u[i,j] = b(phi_j, u_lin, phi_i)      (velocity x velocity)
///   second = R_T[i,j] = b(phi_j, T_lin, psi_i)      (temperature x velocity)
std::pair<AssembledOperator, AssembledOperator> assemble_newton_reaction(
    const Discretization& disc, const Eigen::VectorXd& u_lin, const Eigen::VectorXd& T_lin);

/// C[i,j] = ri * (psi_j, phi_i . e2): velocity rows (y component), temperature columns.
AssembledOperator assemble_buoyancy(const Discretization& disc, double ri);

/// (f, phi_i) for both velocity components. Empty f gives zero.
Eigen::VectorXd assemble_velocity_load(const Discretization& disc, const VectorField& f);
/// (g, psi_i). Empty g gives zero.
Eigen::VectorXd assemble_temperature_load(const Discretization& disc, const ScalarField& g);

}  // namespace bouss
