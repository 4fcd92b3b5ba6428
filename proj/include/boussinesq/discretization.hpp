#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "boussinesq/mesh.hpp"
#include "boussinesq/problem.hpp"
#include "boussinesq/quadrature.hpp"

namespace bouss {

enum class Space { velocity, temperature, pressure };

const char* to_string(Space s);

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Affine element map data: x = x0 + J*xi.
struct ElementGeometry {
  Eigen::Matrix2d inv_jt;  // J^{-T}, maps reference gradients to physical ones
  double det = 0.0;        // det J = 2 * area
};

/// P2 (continuous) and discontinuous-P1 function spaces on a mesh.
///
/// P2 node numbering: vertex v -> v, edge e -> num_vertices + e.
/// Velocity coefficients are component-blocked: [u_x(0..N), u_y(0..N)].
/// Pressure dof 3t+i is barycentric coordinate i of triangle t.
class Discretization {
 public:
  explicit Discretization(std::shared_ptr<const Mesh> mesh, QuadratureRule rule = gauss7_rule());

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const QuadratureRule& rule() const { return rule_; }

  int num_nodes() const { return num_nodes_; }
  int velocity_size() const { return 2 * num_nodes_; }
  int temperature_size() const { return num_nodes_; }
  int pressure_size() const { return 3 * static_cast<int>(mesh_->num_triangles()); }
  int size(Space s) const;

  const std::array<int, 6>& element_nodes(std::size_t t) const { return element_nodes_[t]; }
  const ElementGeometry& geometry(std::size_t t) const { return geometry_[t]; }
  const Point& node(int i) const { return nodes_[i]; }

  /// Physical point of reference coordinates (xi, eta) in triangle t.
  Point map_point(std::size_t t, double xi, double eta) const;

  // Reference basis tables at the quadrature points of rule().
  const std::array<double, 6>& ref_values(std::size_t q) const { return ref_values_[q]; }
  const std::array<std::array<double, 2>, 6>& ref_gradients(std::size_t q) const {
    return ref_grads_[q];
  }

  /// Unconstrained scalar P2 stiffness (grad phi_j, grad phi_i), cached.
  const SparseRowMatrix& scalar_stiffness() const { return stiffness_; }
  /// Integrals of the pressure basis functions; the zero-mean weights.
  const Eigen::VectorXd& pressure_weights() const { return pressure_weights_; }

  /// Nodal interpolation of a scalar / vector function onto P2.
  Eigen::VectorXd interpolate(const ScalarField& fn) const;
  Eigen::VectorXd interpolate(const VectorField& fn) const;
  /// L2 projection onto discontinuous P1, element by element.
  Eigen::VectorXd project_pressure(const ScalarField& fn) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  QuadratureRule rule_;
  int num_nodes_ = 0;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 6>> element_nodes_;
  std::vector<ElementGeometry> geometry_;
  std::vector<std::array<double, 6>> ref_values_;
  std::vector<std::array<std::array<double, 2>, 6>> ref_grads_;
  SparseRowMatrix stiffness_;
  Eigen::VectorXd pressure_weights_;
};

/// Records a corner node claimed by two Dirichlet tags with different values.
struct CornerConflict {
  int dof = 0;
  int kept_tag = 0;
  int dropped_tag = 0;
  double kept_value = 0.0;
  double dropped_value = 0.0;
};

/// Dirichlet bookkeeping for the three fields.
///
/// Velocity is fixed to zero on every boundary node. Temperature is fixed
/// by nodal interpolation on nodes of Dirichlet-tagged edges; a node shared
/// by two Dirichlet tags takes the value of the lower tag.
class DofMap {
 public:
  DofMap(const Discretization& disc, const std::map<int, TemperatureCondition>& temperature_bc);

  int velocity_size() const { return static_cast<int>(velocity_fixed_.size()); }
  int temperature_size() const { return static_cast<int>(temperature_fixed_.size()); }
  int pressure_size() const { return pressure_size_; }

  const std::vector<std::uint8_t>& velocity_fixed() const { return velocity_fixed_; }
  const std::vector<std::uint8_t>& temperature_fixed() const { return temperature_fixed_; }
  const Eigen::VectorXd& temperature_values() const { return temperature_values_; }
  const std::vector<CornerConflict>& corner_conflicts() const { return conflicts_; }

 private:
  std::vector<std::uint8_t> velocity_fixed_;
  std::vector<std::uint8_t> temperature_fixed_;
  Eigen::VectorXd temperature_values_;
  int pressure_size_ = 0;
  std::vector<CornerConflict> conflicts_;
};

/// Coefficient vectors of one iterate.
struct State {
  Eigen::VectorXd u;
  Eigen::VectorXd p;
  Eigen::VectorXd T;

  static State zeros(const Discretization& disc);
};

/// Zero state with the Dirichlet temperature values written in.
State lifted_zero_state(const Discretization& disc, const DofMap& dofs);

}  // namespace bouss
