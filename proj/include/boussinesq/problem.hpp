#pragma once

#include <array>
#include <functional>
#include <map>
#include <stdexcept>

#include "boussinesq/mesh.hpp"

namespace bouss {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<std::array<double, 2>(const Point&)>;

/// Temperature condition attached to one boundary tag. Velocity is no-slip
/// on every tag.
struct TemperatureCondition {
  enum class Kind { dirichlet, neumann_zero };

  Kind kind = Kind::neumann_zero;
  ScalarField value;  // used only for dirichlet

  static TemperatureCondition dirichlet(ScalarField fn) { return {Kind::dirichlet, std::move(fn)}; }
  static TemperatureCondition dirichlet(double c) {
    return {Kind::dirichlet, [c](const Point&) { return c; }};
  }
  static TemperatureCondition neumann() { return {Kind::neumann_zero, {}}; }

  bool is_dirichlet() const { return kind == Kind::dirichlet; }
};

/// Coefficients and data of the steady Boussinesq system. Empty f/g mean zero.
struct ProblemData {
  double nu = 0.1;
  double kappa = 0.1;
  double ri = 0.0;
  VectorField f;
  ScalarField g;
  std::map<int, TemperatureCondition> temperature_bc;

  /// Checks nu > 0, kappa > 0, ri >= 0 and that every tag of the mesh has a
  /// temperature condition. Throws std::invalid_argument.
  void validate(const Mesh& mesh) const;
};

/// Ri from Ra via Ra = Ri Re^2 Pr with Re = 1/nu, Pr = nu/kappa.
inline double richardson_from_rayleigh(double ra, double nu, double kappa) { return ra * nu * kappa; }
inline double rayleigh_from_richardson(double ri, double nu, double kappa) {
  const double re = 1.0 / nu;
  const double pr = nu / kappa;
  return ri * re * re * pr;
}

}  // namespace bouss
