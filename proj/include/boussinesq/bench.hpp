#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "boussinesq/norms.hpp"
#include "boussinesq/solvers.hpp"

namespace bouss {

struct MeshStats {
  int vertices = 0;
  int triangles = 0;
  int boundary_edges = 0;
  double h = 0.0;  // max element diameter
  double area = 0.0;
};
MeshStats mesh_stats(const Mesh& mesh);

/// A benchmark geometry with its boundary data. The Rayleigh number is the
/// free parameter; everything else is fixed by the case.
struct BenchmarkCase {
  std::string name;
  std::shared_ptr<const Mesh> base_mesh;  // before barycentric refinement
  std::shared_ptr<const Mesh> mesh;       // the mesh that is solved on
  bool barycentric = true;
  double nu = 0.1;
  double kappa = 0.1;
  std::string boundary_conditions;  // human-readable summary for manifests
  std::vector<std::string> notes;
  // Builds boundary data and forcing for given (nu, kappa, ri).
  using DataFactory = std::function<ProblemData(double nu, double kappa, double ri)>;
  DataFactory make_data;

  /// Problem data at Rayleigh number ra (Ri = ra nu kappa). Throws
  /// std::invalid_argument for negative or non-finite ra.
  ProblemData problem(double ra) const;
};

/// Unit square, T = 0 on the left wall, T = 1 on the right wall, insulated
/// top and bottom, no forcing. Requires n >= 2.
BenchmarkCase heated_cavity_case(int n, bool refine = true);

/// Built-in stand-in for the complex-domain cavity: the 7x1 rectangle with
/// n cells along the long side and round(n/7) across. T = 1 on top,
/// T = 2x/7 on the bottom, insulated sides.
BenchmarkCase complex_cavity_case(int n, bool refine = true);
/// Same boundary data on a mesh file: tag 1 bottom, tag 3 top, any other
/// tag insulated. Mesh problems propagate as MeshError.
BenchmarkCase complex_cavity_case(const std::filesystem::path& mesh_file, bool refine = true);

/// Manufactured solution on the unit square:
///   psi = x^2 (1-x)^2 y^2 (1-y)^2,  u = (psi_y, -psi_x),
///   p = sin(pi x) cos(pi y),  T = cos(pi x) cos(pi y).
/// T is prescribed on the left/right walls; dT/dn = 0 holds on top/bottom
/// by construction. f and g are the exact residuals of the strong form.
namespace mms {
std::array<double, 2> velocity(const Point& x);
std::array<double, 4> velocity_gradient(const Point& x);
std::array<double, 2> velocity_laplacian(const Point& x);
double pressure(const Point& x);
std::array<double, 2> pressure_gradient(const Point& x);
double temperature(const Point& x);
std::array<double, 2> temperature_gradient(const Point& x);
double temperature_laplacian(const Point& x);
/// -nu lap u + (u.grad)u + grad p - ri (0, T)
std::array<double, 2> momentum_source(const Point& x, double nu, double ri);
/// -kappa lap T + u.grad T
double heat_source(const Point& x, double kappa);
}  // namespace mms

BenchmarkCase mms_case(int n, bool refine = true);

/// Errors of one solve against the manufactured solution.
struct MmsLevel {
  int n = 0;
  double h = 0.0;
  FieldErrors velocity;
  FieldErrors temperature;
  double pressure_l2 = 0.0;
  double divergence = 0.0;
  IterationHistory history;  // final state dropped
};

struct MmsStudy {
  std::vector<MmsLevel> levels;
  // Observed orders between consecutive levels (size levels - 1).
  std::vector<double> velocity_h1_order, velocity_l2_order, temperature_h1_order, pressure_l2_order;
};

/// Solves the manufactured problem on each n (ascending) and fits orders
/// log(e_i / e_{i+1}) / log(h_i / h_{i+1}).
MmsStudy run_mms_study(const std::vector<int>& levels, const SolverConfig& config, double ra = 100.0,
                       bool refine = true);

struct MethodVariant {
  Method method = Method::picard_newton;
  int depth = 0;  // only meaningful for aa-picard-newton

  bool operator==(const MethodVariant&) const = default;
};
std::string to_string(const MethodVariant& v);

/// Every method, paired with every depth when it is aa-picard-newton and
/// with depth 0 otherwise.
std::vector<MethodVariant> expand_variants(const std::vector<Method>& methods,
                                           const std::vector<int>& depths);

struct RunResult {
  std::string case_name;
  MethodVariant variant;
  double ra = 0.0;
  IterationHistory history;
};

struct FrontierEntry {
  std::string case_name;
  MethodVariant variant;
  std::optional<double> max_ra;  // largest tested Ra that converged
};

struct SweepResult {
  std::vector<RunResult> runs;          // sorted by (method, depth, ra)
  std::vector<FrontierEntry> frontier;  // one per variant, same order
};

struct SweepOptions {
  SolverConfig solver;  // method and depth are overridden per run
  int jobs = 1;
  bool keep_states = false;  // keep final states in the results
};

/// Runs a single solve of `variant` at Rayleigh number ra.
RunResult run_case(const BenchmarkCase& bc, const MethodVariant& variant, double ra,
                   const SolverConfig& solver, bool keep_state = true);

/// All (variant, ra) combinations, at most `jobs` at a time. Requires a
/// nonempty, strictly ascending ra_list.
SweepResult sweep(const BenchmarkCase& bc, const std::vector<MethodVariant>& variants,
                  const std::vector<double>& ra_list, const SweepOptions& options);

/// Largest converged Ra per (case, variant). Runs need not be sorted.
std::vector<FrontierEntry> compute_frontier(const std::vector<RunResult>& runs);

/// Refines a frontier bracket by bisection on multiples of `granularity`:
/// `converged_ra` must have converged and `failed_ra` (> converged_ra) not.
/// Returns the largest converged multiple found; the extra solves are
/// appended to `runs` when given.
double refine_frontier(const BenchmarkCase& bc, const MethodVariant& variant, double converged_ra,
                       double failed_ra, double granularity, const SolverConfig& solver,
                       std::vector<RunResult>* runs = nullptr);

/// Thrown for CSV files that cannot be written or read back.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const char* kRunsCsvHeader =
    "case,method,depth,ra,iteration,bnorm_residual,grad_u,grad_T,wall_ms,status";
inline const char* kFrontierCsvHeader = "case,method,depth,max_ra_converged";

/// One row per iteration per run, 17 significant digits.
void write_runs_csv(const std::vector<RunResult>& runs, const std::filesystem::path& path);
void write_frontier_csv(const std::vector<FrontierEntry>& frontier, const std::filesystem::path& path);
/// Writes runs.csv and frontier.csv into `dir` (created if needed).
void write_csv(const SweepResult& result, const std::filesystem::path& dir);

/// Parses runs.csv back into runs (histories without final states). Row
/// order is preserved; rows of one run must be contiguous.
std::vector<RunResult> read_runs_csv(const std::filesystem::path& path);
std::vector<FrontierEntry> read_frontier_csv(const std::filesystem::path& path);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace bouss
