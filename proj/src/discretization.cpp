#include "boussinesq/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "boussinesq/p2.hpp"

namespace bouss {

const char* to_string(Space s) {
  switch (s) {
    case Space::velocity: return "velocity";
    case Space::temperature: return "temperature";
    case Space::pressure: return "pressure";
  }
  return "?";
}

void ProblemData::validate(const Mesh& mesh) const {
  if (!(nu > 0.0)) throw std::invalid_argument("viscosity nu must be positive");
  if (!(kappa > 0.0)) throw std::invalid_argument("diffusivity kappa must be positive");
  if (!(ri >= 0.0) || !std::isfinite(ri)) {
    throw std::invalid_argument("Richardson number must be finite and non-negative");
  }
  for (int tag : mesh.tags()) {
    auto it = temperature_bc.find(tag);
    if (it == temperature_bc.end()) {
      throw std::invalid_argument("no temperature condition for boundary tag " + std::to_string(tag));
    }
    if (it->second.is_dirichlet() && !it->second.value) {
      throw std::invalid_argument("Dirichlet tag " + std::to_string(tag) + " has no value function");
    }
  }
}

Discretization::Discretization(std::shared_ptr<const Mesh> mesh, QuadratureRule rule)
    : mesh_(std::move(mesh)), rule_(std::move(rule)) {
  if (!mesh_) throw std::invalid_argument("Discretization needs a mesh");
  const Mesh& m = *mesh_;
  const int nv = static_cast<int>(m.num_vertices());
  num_nodes_ = nv + static_cast<int>(m.num_edges());

  nodes_ = m.vertices();
  nodes_.reserve(num_nodes_);
  for (const auto& e : m.edges()) {
    const Point& a = m.vertices()[e[0]];
    const Point& b = m.vertices()[e[1]];
    nodes_.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
  }

  element_nodes_.resize(m.num_triangles());
  geometry_.resize(m.num_triangles());
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles()[t];
    const auto& te = m.triangle_edges()[t];
    element_nodes_[t] = {tri[0], tri[1], tri[2], nv + te[0], nv + te[1], nv + te[2]};

    const Point& a = m.vertices()[tri[0]];
    const Point& b = m.vertices()[tri[1]];
    const Point& c = m.vertices()[tri[2]];
    Eigen::Matrix2d jac;
    jac << b.x - a.x, c.x - a.x, b.y - a.y, c.y - a.y;
    geometry_[t].det = jac.determinant();
    geometry_[t].inv_jt = jac.inverse().transpose();
  }

  for (const auto& qp : rule_.points) {
    ref_values_.push_back(p2::values(qp[0], qp[1]));
    ref_grads_.push_back(p2::gradients(qp[0], qp[1]));
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.num_triangles() * 36);
  pressure_weights_ = Eigen::VectorXd::Zero(pressure_size());
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const auto& g = geometry_[t];
    double local[6][6] = {};
    for (std::size_t q = 0; q < rule_.size(); ++q) {
      const double w = rule_.weights[q] * g.det;
      Eigen::Vector2d grad[6];
      for (int i = 0; i < 6; ++i) {
        grad[i] = g.inv_jt * Eigen::Vector2d(ref_grads_[q][i][0], ref_grads_[q][i][1]);
      }
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) local[i][j] += w * grad[i].dot(grad[j]);
      const auto psi = p2::p1_values(rule_.points[q][0], rule_.points[q][1]);
      for (int i = 0; i < 3; ++i) pressure_weights_[3 * t + i] += w * psi[i];
    }
    const auto& nodes = element_nodes_[t];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) trips.emplace_back(nodes[i], nodes[j], local[i][j]);
  }
  stiffness_.resize(num_nodes_, num_nodes_);
  stiffness_.setFromTriplets(trips.begin(), trips.end());
}

int Discretization::size(Space s) const {
  switch (s) {
    case Space::velocity: return velocity_size();
    case Space::temperature: return temperature_size();
    case Space::pressure: return pressure_size();
  }
  return 0;
}

Point Discretization::map_point(std::size_t t, double xi, double eta) const {
  const auto& tri = mesh_->triangles()[t];
  const Point& a = mesh_->vertices()[tri[0]];
  const Point& b = mesh_->vertices()[tri[1]];
  const Point& c = mesh_->vertices()[tri[2]];
  return {a.x + xi * (b.x - a.x) + eta * (c.x - a.x), a.y + xi * (b.y - a.y) + eta * (c.y - a.y)};
}

Eigen::VectorXd Discretization::interpolate(const ScalarField& fn) const {
  Eigen::VectorXd out(num_nodes_);
  for (int i = 0; i < num_nodes_; ++i) out[i] = fn(nodes_[i]);
  return out;
}

Eigen::VectorXd Discretization::interpolate(const VectorField& fn) const {
  Eigen::VectorXd out(2 * num_nodes_);
  for (int i = 0; i < num_nodes_; ++i) {
    const auto v = fn(nodes_[i]);
    out[i] = v[0];
    out[num_nodes_ + i] = v[1];
  }
  return out;
}

Eigen::VectorXd Discretization::project_pressure(const ScalarField& fn) const {
  Eigen::VectorXd out(pressure_size());
  for (std::size_t t = 0; t < mesh_->num_triangles(); ++t) {
    Eigen::Matrix3d mass = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (std::size_t q = 0; q < rule_.size(); ++q) {
      const auto& qp = rule_.points[q];
      const auto psi = p2::p1_values(qp[0], qp[1]);
      const double w = rule_.weights[q] * geometry_[t].det;
      const double val = fn(map_point(t, qp[0], qp[1]));
      for (int i = 0; i < 3; ++i) {
        rhs[i] += w * val * psi[i];
        for (int j = 0; j < 3; ++j) mass(i, j) += w * psi[i] * psi[j];
      }
    }
    out.segment<3>(3 * t) = mass.ldlt().solve(rhs);
  }
  return out;
}

DofMap::DofMap(const Discretization& disc,
               const std::map<int, TemperatureCondition>& temperature_bc) {
  const Mesh& m = disc.mesh();
  const int n = disc.num_nodes();
  const int nv = static_cast<int>(m.num_vertices());
  velocity_fixed_.assign(2 * n, 0);
  temperature_fixed_.assign(n, 0);
  temperature_values_ = Eigen::VectorXd::Zero(n);
  pressure_size_ = disc.pressure_size();

  // Nodes of every boundary edge, visited in ascending tag order so the
  // lower tag claims shared corners first.
  std::vector<std::pair<int, std::array<int, 3>>> edges;
  for (std::size_t e = 0; e < m.num_edges(); ++e) {
    const int tag = m.edge_tags()[e];
    if (tag < 0) continue;
    edges.push_back({tag, {m.edges()[e][0], m.edges()[e][1], nv + static_cast<int>(e)}});
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<int> owner(n, -1);
  for (const auto& [tag, nodes] : edges) {
    for (int node : nodes) {
      velocity_fixed_[node] = 1;
      velocity_fixed_[n + node] = 1;
    }
    auto it = temperature_bc.find(tag);
    if (it == temperature_bc.end() || !it->second.is_dirichlet()) continue;
    for (int node : nodes) {
      const double value = it->second.value(disc.node(node));
      if (owner[node] == -1) {
        owner[node] = tag;
        temperature_fixed_[node] = 1;
        temperature_values_[node] = value;
      } else if (owner[node] != tag && std::abs(value - temperature_values_[node]) > 1e-12) {
        conflicts_.push_back({node, owner[node], tag, temperature_values_[node], value});
      }
    }
  }
}

State State::zeros(const Discretization& disc) {
  return {Eigen::VectorXd::Zero(disc.velocity_size()), Eigen::VectorXd::Zero(disc.pressure_size()),
          Eigen::VectorXd::Zero(disc.temperature_size())};
}

State lifted_zero_state(const Discretization& disc, const DofMap& dofs) {
  State s = State::zeros(disc);
  for (int i = 0; i < dofs.temperature_size(); ++i) {
    if (dofs.temperature_fixed()[i]) s.T[i] = dofs.temperature_values()[i];
  }
  return s;
}

}  // namespace bouss
