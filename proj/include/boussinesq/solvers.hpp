#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boussinesq/anderson.hpp"
#include "boussinesq/assembly.hpp"
#include "boussinesq/discretization.hpp"
#include "boussinesq/linear_system.hpp"

namespace bouss {

enum class Method { picard, newton, picard_newton, aa_picard_newton };

const char* to_string(Method m);
/// Parses "picard", "newton", "picard-newton", "aa-picard-newton".
std::optional<Method> parse_method(const std::string& name);
std::vector<std::string> method_names();

/// Mesh, function spaces, boundary data and the iteration-independent
/// operators of one Boussinesq problem. Immutable once built.
class DiscreteProblem {
 public:
  DiscreteProblem(std::shared_ptr<const Mesh> mesh, ProblemData data);

  const Discretization& disc() const { return disc_; }
  const DofMap& dofs() const { return dofs_; }
  const ProblemData& data() const { return data_; }

  /// (0,0,0) with the temperature Dirichlet values written in.
  State initial_state() const;

  // Cached operators and loads.
  const AssembledOperator& velocity_diffusion() const { return a_u_; }
  const AssembledOperator& temperature_diffusion() const { return a_t_; }
  const AssembledOperator& divergence() const { return div_; }
  const SparseRowMatrix& divergence_transpose() const { return div_t_; }
  const AssembledOperator& buoyancy() const { return buoy_; }
  const Eigen::VectorXd& velocity_load() const { return load_u_; }
  const Eigen::VectorXd& temperature_load() const { return load_t_; }

  /// Metric of the B inner product on stacked [u; T] vectors:
  /// blockdiag(nu K, nu K, kappa K).
  const SparseRowMatrix& b_metric() const { return b_metric_; }

  /// Unknown constraints for the three linear systems the solvers build.
  Constraints temperature_constraints() const;
  Constraints oseen_constraints() const;
  Constraints coupled_constraints() const;

 private:
  ProblemData data_;
  Discretization disc_;
  DofMap dofs_;
  AssembledOperator a_u_, a_t_, div_, buoy_;
  SparseRowMatrix div_t_;
  Eigen::VectorXd load_u_, load_t_;
  SparseRowMatrix b_metric_;
};

/// Stacks the velocity and temperature of a state into one vector.
Eigen::VectorXd stack_fields(const State& s);
/// Inverse of stack_fields; pressure is taken from `pressure_source`.
State unstack_fields(const Eigen::VectorXd& v, const State& pressure_source);

// Unconstrained linear systems of the three solver stages. Unknown order:
// temperature [T]; Oseen [u, p]; coupled Newton [u, T, p].
LinearSystem temperature_system(const DiscreteProblem& prob, const Eigen::VectorXd& u_adv);
LinearSystem oseen_system(const DiscreteProblem& prob, const Eigen::VectorXd& u_adv,
                          const Eigen::VectorXd& T);
LinearSystem newton_system(const DiscreteProblem& prob, const State& x_lin);

/// Temperature half of a Picard step: kappa-diffusion plus convection by
/// u_adv, right-hand side g. Does not involve the buoyancy coupling.
Eigen::VectorXd picard_temperature(const DiscreteProblem& prob, const Eigen::VectorXd& u_adv);

/// Oseen half of a Picard step for a given temperature.
State picard_oseen(const DiscreteProblem& prob, const Eigen::VectorXd& u_adv, const Eigen::VectorXd& T);

State picard_step(const DiscreteProblem& prob, const State& x);
State newton_step(const DiscreteProblem& prob, const State& x_lin);
/// Newton linearized at the Picard image of x.
State picard_newton_step(const DiscreteProblem& prob, const State& x);
/// Picard image of x, pushed into `hist` and Anderson-mixed with depth m,
/// followed by a Newton step at the mixed state.
State aa_picard_newton_step(const DiscreteProblem& prob, const State& x, AAHistory& hist, int m);

/// AA window matching the problem's B inner product.
AAHistory make_aa_history(const DiscreteProblem& prob, int m);

enum class Status { running, converged, max_iters, diverged };
const char* to_string(Status s);
std::optional<Status> parse_status(const std::string& s);

struct SolverConfig {
  Method method = Method::picard_newton;
  int depth = 0;
  double tolerance = 1e-8;
  int max_iters = 200;
  double blowup_threshold = 1e10;

  /// Throws std::invalid_argument on tolerance <= 0, max_iters < 1, depth < 0.
  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  double residual = 0.0;  // B-norm of x^k - x^{k-1}
  double grad_u = 0.0;
  double grad_T = 0.0;
  double wall_ms = 0.0;
  Status status = Status::running;
};

struct IterationHistory {
  std::vector<IterationRecord> records;
  Status status = Status::running;
  State final_state;
  std::string message;  // reason for a failure status, if any

  std::vector<double> residuals() const;
  int iterations() const { return static_cast<int>(records.size()); }
};

/// Runs the configured iteration from initial_state() until the B-norm
/// difference drops below the tolerance, the iteration cap is hit, or the
/// iterate blows up. Every failure mode becomes a status.
IterationHistory iterate(const DiscreteProblem& prob, const SolverConfig& config);

/// Applies one step of the configured method. For AA the history is used
/// and updated.
State apply_step(const DiscreteProblem& prob, const SolverConfig& config, const State& x,
                 AAHistory* hist);

/// Least-squares slope of log r_{k+1} against log r_k over the last
/// `window` residuals above 100 machine epsilon. Trailing residuals below
/// that floor are skipped. Needs at least 4 usable residuals.
std::optional<double> estimate_order(std::span<const double> residuals, int window = 4);
std::optional<double> estimate_order(const IterationHistory& hist, int window = 4);

/// Geometric mean of r_{k+1}/r_k over the same kind of window.
std::optional<double> estimate_ratio(std::span<const double> residuals, int window = 4);

}  // namespace bouss
