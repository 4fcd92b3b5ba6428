#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace bouss {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Thrown when a factorization fails or a solve misses its residual bound.
class LinearSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// How the zero-mean pressure constraint enters the linear system.
///  multiplier: one Lagrange multiplier row/column.
///  pin: one pressure unknown is fixed to zero and the block is shifted to
///       zero mean after the solve. Equivalent to the multiplier when the
///       constant lies in the block's space and the velocity vanishes on the
///       boundary (the multiplier is then zero), and far cheaper to factor.
enum class MeanConstraint { multiplier, pin };

/// Dirichlet values and an optional zero-mean constraint for one block of
/// unknowns (the pressure), expressed in the unknown numbering of a system.
struct Constraints {
  std::vector<std::uint8_t> fixed;
  Eigen::VectorXd values;
  int mean_offset = -1;           // first unknown of the constrained block
  Eigen::VectorXd mean_weights;   // integrals of the block's basis functions
  MeanConstraint mean_mode = MeanConstraint::pin;

  bool has_mean() const { return mean_offset >= 0; }
  /// Unknown fixed to zero in pin mode (first one with nonzero weight).
  int pinned_unknown() const;
};

/// Square sparse system. After apply_constraints, `multiplier_row` is the
/// index of the appended Lagrange multiplier (or -1).
struct LinearSystem {
  SparseRowMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<std::uint8_t> fixed;
  int multiplier_row = -1;
};

/// Replaces fixed rows by identity rows carrying the prescribed value and
/// moves the fixed columns to the right-hand side. The mean constraint
/// either appends one multiplier row/column enforcing
/// sum_k w_k x_{offset+k} = 0, or pins one unknown of the block.
LinearSystem apply_constraints(const LinearSystem& raw, const Constraints& constraints);

/// apply_constraints + solve_direct. Returns the n original unknowns with
/// the constrained block at zero weighted mean, whichever mode is used.
Eigen::VectorXd solve_constrained(const LinearSystem& raw, const Constraints& constraints);

/// Maximum allowed relative residual |Ax-b|/|b| of a direct solve.
inline constexpr double kDirectSolveTolerance = 1e-11;

/// Sparse LU with fill-reducing ordering. Fails with LinearSolveError on a
/// singular matrix, non-finite input, or a residual above the bound (after
/// up to two steps of iterative refinement).
Eigen::VectorXd solve_direct(const LinearSystem& sys);

/// Name of the sparse LU backend compiled in.
const char* direct_solver_backend();

}  // namespace bouss
