#include "boussinesq/assembly.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "boussinesq/p2.hpp"

namespace bouss {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Basis data of one element at one quadrature point.
struct PointEval {
  double weight = 0.0;                 // quadrature weight times |det J|
  const std::array<double, 6>* phi = nullptr;
  std::array<Eigen::Vector2d, 6> grad;  // physical gradients
  double xi = 0.0, eta = 0.0;
};

template <typename Fn>
void for_each_point(const Discretization& disc, std::size_t t, Fn&& fn) {
  const auto& geo = disc.geometry(t);
  const auto& rule = disc.rule();
  PointEval pe;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    pe.weight = rule.weights[q] * geo.det;
    pe.phi = &disc.ref_values(q);
    pe.xi = rule.points[q][0];
    pe.eta = rule.points[q][1];
    const auto& rg = disc.ref_gradients(q);
    for (int i = 0; i < 6; ++i) pe.grad[i] = geo.inv_jt * Eigen::Vector2d(rg[i][0], rg[i][1]);
    fn(pe);
  }
}

AssembledOperator finish(Space rows, Space cols, int nrows, int ncols, Triplets& trips) {
  AssembledOperator op{rows, cols, SparseRowMatrix(nrows, ncols)};
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  op.matrix.prune(0.0);
  op.matrix.makeCompressed();
  return op;
}

// Adds a 6x6 scalar element block to the given component blocks.
void scatter(Triplets& trips, const std::array<int, 6>& nodes, const double (&local)[6][6],
             int row_offset, int col_offset) {
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (local[i][j] != 0.0) trips.emplace_back(row_offset + nodes[i], col_offset + nodes[j], local[i][j]);
}

void check_size(const Eigen::VectorXd& v, int expected, const char* what) {
  if (v.size() != expected) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(expected) +
                                " coefficients, got " + std::to_string(v.size()));
  }
}

}  // namespace

AssembledOperator assemble_diffusion(const Discretization& disc, Space space, double coeff) {
  if (space == Space::pressure) throw std::invalid_argument("diffusion is not defined on pressure");
  const int n = disc.num_nodes();
  Triplets trips;
  const int ncomp = space == Space::velocity ? 2 : 1;
  trips.reserve(disc.mesh().num_triangles() * 36 * ncomp);
  const auto& k = disc.scalar_stiffness();
  for (int c = 0; c < ncomp; ++c)
    for (int r = 0; r < k.outerSize(); ++r)
      for (SparseRowMatrix::InnerIterator it(k, r); it; ++it)
        trips.emplace_back(c * n + r, c * n + it.col(), coeff * it.value());
  const int size = ncomp * n;
  return finish(space, space, size, size, trips);
}

AssembledOperator assemble_mass(const Discretization& disc, Space space) {
  if (space == Space::pressure) throw std::invalid_argument("use pressure_weights for pressure");
  const int n = disc.num_nodes();
  const int ncomp = space == Space::velocity ? 2 : 1;
  Triplets trips;
  for (std::size_t t = 0; t < disc.mesh().num_triangles(); ++t) {
    double local[6][6] = {};
    for_each_point(disc, t, [&](const PointEval& pe) {
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) local[i][j] += pe.weight * (*pe.phi)[i] * (*pe.phi)[j];
    });
    for (int c = 0; c < ncomp; ++c) scatter(trips, disc.element_nodes(t), local, c * n, c * n);
  }
  return finish(space, space, ncomp * n, ncomp * n, trips);
}

AssembledOperator assemble_divergence(const Discretization& disc) {
  const int n = disc.num_nodes();
  Triplets trips;
  for (std::size_t t = 0; t < disc.mesh().num_triangles(); ++t) {
    double local[3][2][6] = {};
    for_each_point(disc, t, [&](const PointEval& pe) {
      const auto psi = p2::p1_values(pe.xi, pe.eta);
      for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 2; ++c)
          for (int j = 0; j < 6; ++j) local[i][c][j] -= pe.weight * pe.grad[j][c] * psi[i];
    });
    const auto& nodes = disc.element_nodes(t);
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 2; ++c)
        for (int j = 0; j < 6; ++j)
          if (local[i][c][j] != 0.0)
            trips.emplace_back(static_cast<int>(3 * t) + i, c * n + nodes[j], local[i][c][j]);
  }
  return finish(Space::pressure, Space::velocity, disc.pressure_size(), 2 * n, trips);
}

AssembledOperator assemble_skew_convection(const Discretization& disc, const Eigen::VectorXd& a,
                                           Space target) {
  if (target == Space::pressure) throw std::invalid_argument("convection is not defined on pressure");
  const int n = disc.num_nodes();
  check_size(a, 2 * n, "assemble_skew_convection");
  const int ncomp = target == Space::velocity ? 2 : 1;
  Triplets trips;
  trips.reserve(disc.mesh().num_triangles() * 36 * ncomp);
  for (std::size_t t = 0; t < disc.mesh().num_triangles(); ++t) {
    const auto& nodes = disc.element_nodes(t);
    double local[6][6] = {};
    for_each_point(disc, t, [&](const PointEval& pe) {
      Eigen::Vector2d av = Eigen::Vector2d::Zero();
      double div = 0.0;
      for (int k = 0; k < 6; ++k) {
        const double ax = a[nodes[k]], ay = a[n + nodes[k]];
        av += (*pe.phi)[k] * Eigen::Vector2d(ax, ay);
        div += ax * pe.grad[k][0] + ay * pe.grad[k][1];
      }
      for (int j = 0; j < 6; ++j) {
        const double adv = av.dot(pe.grad[j]) + 0.5 * div * (*pe.phi)[j];
        for (int i = 0; i < 6; ++i) local[i][j] += pe.weight * adv * (*pe.phi)[i];
      }
    });
    for (int c = 0; c < ncomp; ++c) scatter(trips, nodes, local, c * n, c * n);
  }
  return finish(target, target, ncomp * n, ncomp * n, trips);
}

std::pair<AssembledOperator, AssembledOperator> assemble_newton_reaction(
    const Discretization& disc, const Eigen::VectorXd& u_lin, const Eigen::VectorXd& T_lin) {
  const int n = disc.num_nodes();
  check_size(u_lin, 2 * n, "assemble_newton_reaction(u_lin)");
  check_size(T_lin, n, "assemble_newton_reaction(T_lin)");
  Triplets tu, tt;
  tu.reserve(disc.mesh().num_triangles() * 36 * 4);
  tt.reserve(disc.mesh().num_triangles() * 36 * 2);
  for (std::size_t t = 0; t < disc.mesh().num_triangles(); ++t) {
    const auto& nodes = disc.element_nodes(t);
    // ru[d][c][i][j]: test component d, trial component c.
    double ru[2][2][6][6] = {};
    double rt[2][6][6] = {};
    for_each_point(disc, t, [&](const PointEval& pe) {
      double uval[2] = {0.0, 0.0};
      Eigen::Vector2d ugrad[2] = {Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
      double tval = 0.0;
      Eigen::Vector2d tgrad = Eigen::Vector2d::Zero();
      for (int k = 0; k < 6; ++k) {
        const double phi = (*pe.phi)[k];
        for (int d = 0; d < 2; ++d) {
          const double coef = u_lin[d * n + nodes[k]];
          uval[d] += coef * phi;
          ugrad[d] += coef * pe.grad[k];
        }
        tval += T_lin[nodes[k]] * phi;
        tgrad += T_lin[nodes[k]] * pe.grad[k];
      }
      // b(phi_j e_c, s, w) = phi_j d_c s w + 1/2 d_c phi_j s w
      for (int j = 0; j < 6; ++j) {
        const double phij = (*pe.phi)[j];
        for (int c = 0; c < 2; ++c) {
          const double dphij = pe.grad[j][c];
          for (int i = 0; i < 6; ++i) {
            const double wphi = pe.weight * (*pe.phi)[i];
            for (int d = 0; d < 2; ++d) ru[d][c][i][j] += wphi * (phij * ugrad[d][c] + 0.5 * dphij * uval[d]);
            rt[c][i][j] += wphi * (phij * tgrad[c] + 0.5 * dphij * tval);
          }
        }
      }
    });
    for (int d = 0; d < 2; ++d)
      for (int c = 0; c < 2; ++c) scatter(tu, nodes, ru[d][c], d * n, c * n);
    for (int c = 0; c < 2; ++c) scatter(tt, nodes, rt[c], 0, c * n);
  }
  return {finish(Space::velocity, Space::velocity, 2 * n, 2 * n, tu),
          finish(Space::temperature, Space::velocity, n, 2 * n, tt)};
}

AssembledOperator assemble_buoyancy(const Discretization& disc, double ri) {
  const int n = disc.num_nodes();
  Triplets trips;
  if (ri != 0.0) {
    for (std::size_t t = 0; t < disc.mesh().num_triangles(); ++t) {
      double local[6][6] = {};
      for_each_point(disc, t, [&](const PointEval& pe) {
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 6; ++j) local[i][j] += ri * pe.weight * (*pe.phi)[i] * (*pe.phi)[j];
      });
      scatter(trips, disc.element_nodes(t), local, n, 0);
    }
  }
  return finish(Space::velocity, Space::temperature, 2 * n, n, trips);
}

Eigen::VectorXd assemble_velocity_load(const Discretization& disc, const VectorField& f) {
  const int n = disc.num_nodes();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * n);
  if (!f) return out;
  for (std::size_t t = 0; t < disc.mesh().num_triangles(); ++t) {
    const auto& nodes = disc.element_nodes(t);
    for_each_point(disc, t, [&](const PointEval& pe) {
      const auto fv = f(disc.map_point(t, pe.xi, pe.eta));
      for (int i = 0; i < 6; ++i) {
        out[nodes[i]] += pe.weight * fv[0] * (*pe.phi)[i];
        out[n + nodes[i]] += pe.weight * fv[1] * (*pe.phi)[i];
      }
    });
  }
  return out;
}

Eigen::VectorXd assemble_temperature_load(const Discretization& disc, const ScalarField& g) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(disc.num_nodes());
  if (!g) return out;
  for (std::size_t t = 0; t < disc.mesh().num_triangles(); ++t) {
    const auto& nodes = disc.element_nodes(t);
    for_each_point(disc, t, [&](const PointEval& pe) {
      const double gv = g(disc.map_point(t, pe.xi, pe.eta));
      for (int i = 0; i < 6; ++i) out[nodes[i]] += pe.weight * gv * (*pe.phi)[i];
    });
  }
  return out;
}

}  // namespace bouss
