#include "boussinesq/linear_system.hpp"

#include <cctype>
#include <cmath>
#include <vector>

#include <Eigen/SparseLU>
#ifdef BOUSS_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

namespace bouss {

int Constraints::pinned_unknown() const {
  for (int k = 0; k < mean_weights.size(); ++k)
    if (mean_weights[k] != 0.0) return mean_offset + k;
  throw std::invalid_argument("mean constraint has all-zero weights");
}

LinearSystem apply_constraints(const LinearSystem& raw, const Constraints& c) {
  const int n = static_cast<int>(raw.matrix.rows());
  if (raw.matrix.cols() != n || raw.rhs.size() != n) {
    throw std::invalid_argument("apply_constraints: system is not square");
  }
  if (static_cast<int>(c.fixed.size()) != n || c.values.size() != n) {
    throw std::invalid_argument("apply_constraints: constraint size does not match the system");
  }
  const bool mult = c.has_mean() && c.mean_mode == MeanConstraint::multiplier;
  const int size = mult ? n + 1 : n;

  LinearSystem out;
  out.fixed = c.fixed;
  if (c.has_mean() && !mult) {
    const int pin = c.pinned_unknown();
    if (c.fixed[pin]) throw std::invalid_argument("apply_constraints: pinned unknown is already fixed");
    out.fixed[pin] = 1;
  }
  out.rhs = Eigen::VectorXd::Zero(size);
  out.rhs.head(n) = raw.rhs;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(raw.matrix.nonZeros() + (mult ? 2 * c.mean_weights.size() : 0));
  // pinned unknown carries value 0
  auto value = [&](int j) { return c.fixed[j] ? c.values[j] : 0.0; };

  for (int i = 0; i < n; ++i) {
    if (out.fixed[i]) {
      trips.emplace_back(i, i, 1.0);
      out.rhs[i] = value(i);
      continue;
    }
    for (SparseRowMatrix::InnerIterator it(raw.matrix, i); it; ++it) {
      const int j = static_cast<int>(it.col());
      if (out.fixed[j]) {
        out.rhs[i] -= it.value() * value(j);
      } else {
        trips.emplace_back(i, j, it.value());
      }
    }
  }
  if (mult) {
    out.multiplier_row = n;
    for (int k = 0; k < c.mean_weights.size(); ++k) {
      const double w = c.mean_weights[k];
      if (w == 0.0) continue;
      trips.emplace_back(n, c.mean_offset + k, w);
      trips.emplace_back(c.mean_offset + k, n, w);
    }
    out.fixed.push_back(0);
  }
  out.matrix.resize(size, size);
  out.matrix.setFromTriplets(trips.begin(), trips.end());
  out.matrix.makeCompressed();
  return out;
}

const char* direct_solver_backend() {
#ifdef BOUSS_HAVE_UMFPACK
  return "umfpack";
#else
  return "eigen-sparselu";
#endif
}

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

bool all_finite(const SparseRowMatrix& m) {
  const double* v = m.valuePtr();
  for (Eigen::Index k = 0; k < m.nonZeros(); ++k)
    if (!std::isfinite(v[k])) return false;
  return true;
}

using SparseLUSolver = Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>;

// Pivot diagnostics come from SparseLU, which reports the failing column.
std::string singular_message(const ColMatrix& a) {
  SparseLUSolver lu;
  lu.compute(a);
  std::string msg = "singular matrix";
  if (lu.info() != Eigen::Success) {
    msg += ": " + lu.lastErrorMessage();
    while (!msg.empty() && std::isspace(static_cast<unsigned char>(msg.back()))) msg.pop_back();
    msg += " (pivot position, 1-based in the permuted ordering)";
  } else {
    msg += ": numerically singular pivot";
  }
  return msg;
}

template <typename Solver>
Eigen::VectorXd factor_and_solve(Solver& lu, const ColMatrix& a, const Eigen::VectorXd& b) {
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw LinearSolveError(singular_message(a));
  Eigen::VectorXd x = lu.solve(b);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return x;
  Eigen::VectorXd r = b - a * x;
  for (int step = 0; step < 2 && r.norm() > kDirectSolveTolerance * bnorm; ++step) {
    x += lu.solve(r);
    r = b - a * x;
  }
  const double rel = r.norm() / bnorm;
  if (!(rel <= kDirectSolveTolerance)) {
    throw LinearSolveError("direct solve residual " + std::to_string(rel) + " exceeds bound");
  }
  return x;
}

}  // namespace

Eigen::VectorXd solve_direct(const LinearSystem& sys) {
  if (sys.matrix.rows() != sys.matrix.cols() || sys.rhs.size() != sys.matrix.rows()) {
    throw LinearSolveError("system is not square");
  }
  if (!all_finite(sys.matrix) || !sys.rhs.allFinite()) {
    throw LinearSolveError("non-finite entry in matrix or right-hand side");
  }
  const ColMatrix a = sys.matrix;
#ifdef BOUSS_HAVE_UMFPACK
  Eigen::UmfPackLU<ColMatrix> lu;
  // The dense multiplier row ruins the default column ordering (10x fill);
  // symmetric strategy with METIS on A+A^T copes much better.
  if (sys.multiplier_row >= 0) {
    lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
    lu.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_METIS;
  }
#else
  SparseLUSolver lu;
#endif
  return factor_and_solve(lu, a, sys.rhs);
}

Eigen::VectorXd solve_constrained(const LinearSystem& raw, const Constraints& c) {
  const auto n = raw.matrix.rows();
  Eigen::VectorXd x = solve_direct(apply_constraints(raw, c));
  if (x.size() > n) x.conservativeResize(n);
  if (c.has_mean()) {
    const auto m = c.mean_weights.size();
    auto block = x.segment(c.mean_offset, m);
    const double area = c.mean_weights.sum();
    if (area != 0.0) block.array() -= c.mean_weights.dot(block) / area;
  }
  return x;
}

}  // namespace bouss
