#include "boussinesq/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "boussinesq/norms.hpp"

namespace bouss {

const char* to_string(Method m) {
  switch (m) {
    case Method::picard: return "picard";
    case Method::newton: return "newton";
    case Method::picard_newton: return "picard-newton";
    case Method::aa_picard_newton: return "aa-picard-newton";
  }
  return "?";
}

std::vector<std::string> method_names() {
  return {"picard", "newton", "picard-newton", "aa-picard-newton"};
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m : {Method::picard, Method::newton, Method::picard_newton, Method::aa_picard_newton})
    if (name == to_string(m)) return m;
  return std::nullopt;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::running: return "running";
    case Status::converged: return "converged";
    case Status::max_iters: return "max-iters";
    case Status::diverged: return "diverged";
  }
  return "?";
}

std::optional<Status> parse_status(const std::string& s) {
  for (Status st : {Status::running, Status::converged, Status::max_iters, Status::diverged})
    if (s == to_string(st)) return st;
  return std::nullopt;
}

namespace {

// Collects scaled operator blocks into one unconstrained system.
class BlockBuilder {
 public:
  explicit BlockBuilder(int size) : size_(size) {}

  void add(const SparseRowMatrix& m, int row0, int col0, double scale = 1.0) {
    for (int r = 0; r < m.outerSize(); ++r)
      for (SparseRowMatrix::InnerIterator it(m, r); it; ++it)
        trips_.emplace_back(row0 + r, col0 + static_cast<int>(it.col()), scale * it.value());
  }

  LinearSystem build(Eigen::VectorXd rhs) {
    LinearSystem sys;
    sys.matrix.resize(size_, size_);
    sys.matrix.setFromTriplets(trips_.begin(), trips_.end());
    sys.rhs = std::move(rhs);
    return sys;
  }

 private:
  int size_;
  std::vector<Eigen::Triplet<double>> trips_;
};

Eigen::VectorXd solve_stage(const LinearSystem& raw, const Constraints& c, const char* stage) {
  try {
    return solve_constrained(raw, c);
  } catch (const LinearSolveError& e) {
    throw LinearSolveError(std::string(stage) + ": " + e.what());
  }
}

}  // namespace

DiscreteProblem::DiscreteProblem(std::shared_ptr<const Mesh> mesh, ProblemData data)
    : data_((data.validate(*mesh), std::move(data))),
      disc_(std::move(mesh)),
      dofs_(disc_, data_.temperature_bc) {
  a_u_ = assemble_diffusion(disc_, Space::velocity, data_.nu);
  a_t_ = assemble_diffusion(disc_, Space::temperature, data_.kappa);
  div_ = assemble_divergence(disc_);
  div_t_ = div_.matrix.transpose();
  buoy_ = assemble_buoyancy(disc_, data_.ri);
  load_u_ = assemble_velocity_load(disc_, data_.f);
  load_t_ = assemble_temperature_load(disc_, data_.g);

  const int n = disc_.num_nodes();
  BlockBuilder metric(3 * n);
  metric.add(disc_.scalar_stiffness(), 0, 0, data_.nu);
  metric.add(disc_.scalar_stiffness(), n, n, data_.nu);
  metric.add(disc_.scalar_stiffness(), 2 * n, 2 * n, data_.kappa);
  b_metric_ = metric.build(Eigen::VectorXd::Zero(3 * n)).matrix;
}

State DiscreteProblem::initial_state() const { return lifted_zero_state(disc_, dofs_); }

Constraints DiscreteProblem::temperature_constraints() const {
  Constraints c;
  c.fixed = dofs_.temperature_fixed();
  c.values = dofs_.temperature_values();
  return c;
}

Constraints DiscreteProblem::oseen_constraints() const {
  const int nu = disc_.velocity_size(), np = disc_.pressure_size();
  Constraints c;
  c.fixed.assign(nu + np, 0);
  std::copy(dofs_.velocity_fixed().begin(), dofs_.velocity_fixed().end(), c.fixed.begin());
  c.values = Eigen::VectorXd::Zero(nu + np);
  c.mean_offset = nu;
  c.mean_weights = disc_.pressure_weights();
  return c;
}

Constraints DiscreteProblem::coupled_constraints() const {
  const int nu = disc_.velocity_size(), nt = disc_.temperature_size(), np = disc_.pressure_size();
  Constraints c;
  c.fixed.assign(nu + nt + np, 0);
  c.values = Eigen::VectorXd::Zero(nu + nt + np);
  std::copy(dofs_.velocity_fixed().begin(), dofs_.velocity_fixed().end(), c.fixed.begin());
  for (int i = 0; i < nt; ++i) {
    c.fixed[nu + i] = dofs_.temperature_fixed()[i];
    c.values[nu + i] = dofs_.temperature_values()[i];
  }
  c.mean_offset = nu + nt;
  c.mean_weights = disc_.pressure_weights();
  return c;
}

Eigen::VectorXd stack_fields(const State& s) {
  Eigen::VectorXd v(s.u.size() + s.T.size());
  v << s.u, s.T;
  return v;
}

State unstack_fields(const Eigen::VectorXd& v, const State& pressure_source) {
  const auto nu = pressure_source.u.size();
  return {v.head(nu), pressure_source.p, v.tail(v.size() - nu)};
}

AAHistory make_aa_history(const DiscreteProblem& prob, int m) { return AAHistory(m, prob.b_metric()); }

LinearSystem temperature_system(const DiscreteProblem& prob, const Eigen::VectorXd& u_adv) {
  const int nt = prob.disc().temperature_size();
  const auto conv = assemble_skew_convection(prob.disc(), u_adv, Space::temperature);
  BlockBuilder b(nt);
  b.add(prob.temperature_diffusion().matrix, 0, 0);
  b.add(conv.matrix, 0, 0);
  return b.build(prob.temperature_load());
}

LinearSystem oseen_system(const DiscreteProblem& prob, const Eigen::VectorXd& u_adv,
                          const Eigen::VectorXd& T) {
  const int nu = prob.disc().velocity_size(), np = prob.disc().pressure_size();
  const auto conv = assemble_skew_convection(prob.disc(), u_adv, Space::velocity);
  BlockBuilder b(nu + np);
  b.add(prob.velocity_diffusion().matrix, 0, 0);
  b.add(conv.matrix, 0, 0);
  b.add(prob.divergence_transpose(), 0, nu);
  b.add(prob.divergence().matrix, nu, 0);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu + np);
  rhs.head(nu) = prob.velocity_load() + prob.buoyancy().matrix * T;
  return b.build(std::move(rhs));
}

LinearSystem newton_system(const DiscreteProblem& prob, const State& x_lin) {
  const auto& disc = prob.disc();
  const int nu = disc.velocity_size(), nt = disc.temperature_size(), np = disc.pressure_size();
  const int t0 = nu, p0 = nu + nt;

  const auto conv_u = assemble_skew_convection(disc, x_lin.u, Space::velocity);
  const auto conv_t = assemble_skew_convection(disc, x_lin.u, Space::temperature);
  const auto [react_u, react_t] = assemble_newton_reaction(disc, x_lin.u, x_lin.T);

  BlockBuilder b(nu + nt + np);
  b.add(prob.velocity_diffusion().matrix, 0, 0);
  b.add(conv_u.matrix, 0, 0);
  b.add(react_u.matrix, 0, 0);
  b.add(prob.divergence_transpose(), 0, p0);
  b.add(prob.buoyancy().matrix, 0, t0, -1.0);
  b.add(prob.temperature_diffusion().matrix, t0, t0);
  b.add(conv_t.matrix, t0, t0);
  b.add(react_t.matrix, t0, 0);
  b.add(prob.divergence().matrix, p0, 0);

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu + nt + np);
  rhs.head(nu) = prob.velocity_load() + conv_u.matrix * x_lin.u;
  rhs.segment(t0, nt) = prob.temperature_load() + conv_t.matrix * x_lin.T;
  return b.build(std::move(rhs));
}

Eigen::VectorXd picard_temperature(const DiscreteProblem& prob, const Eigen::VectorXd& u_adv) {
  return solve_stage(temperature_system(prob, u_adv), prob.temperature_constraints(),
                     "picard/temperature");
}

State picard_oseen(const DiscreteProblem& prob, const Eigen::VectorXd& u_adv, const Eigen::VectorXd& T) {
  const int nu = prob.disc().velocity_size(), np = prob.disc().pressure_size();
  const Eigen::VectorXd sol =
      solve_stage(oseen_system(prob, u_adv, T), prob.oseen_constraints(), "picard/oseen");
  return {sol.head(nu), sol.segment(nu, np), T};
}

State picard_step(const DiscreteProblem& prob, const State& x) {
  const Eigen::VectorXd T = picard_temperature(prob, x.u);
  return picard_oseen(prob, x.u, T);
}

State newton_step(const DiscreteProblem& prob, const State& x_lin) {
  const auto& disc = prob.disc();
  const int nu = disc.velocity_size(), nt = disc.temperature_size(), np = disc.pressure_size();
  const Eigen::VectorXd sol =
      solve_stage(newton_system(prob, x_lin), prob.coupled_constraints(), "newton");
  return {sol.head(nu), sol.segment(nu + nt, np), sol.segment(nu, nt)};
}

State picard_newton_step(const DiscreteProblem& prob, const State& x) {
  return newton_step(prob, picard_step(prob, x));
}

State aa_picard_newton_step(const DiscreteProblem& prob, const State& x, AAHistory& hist, int m) {
  const State gx = picard_step(prob, x);
  hist.push(stack_fields(x), stack_fields(gx));
  const Eigen::VectorXd mixed = anderson_mix(hist, m);
  return newton_step(prob, unstack_fields(mixed, gx));
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  if (!(blowup_threshold > 0.0)) throw std::invalid_argument("blowup threshold must be positive");
}

std::vector<double> IterationHistory::residuals() const {
  std::vector<double> r;
  r.reserve(records.size());
  for (const auto& rec : records) r.push_back(rec.residual);
  return r;
}

State apply_step(const DiscreteProblem& prob, const SolverConfig& config, const State& x,
                 AAHistory* hist) {
  switch (config.method) {
    case Method::picard: return picard_step(prob, x);
    case Method::newton: return newton_step(prob, x);
    case Method::picard_newton: return picard_newton_step(prob, x);
    case Method::aa_picard_newton:
      if (!hist) throw std::invalid_argument("aa-picard-newton needs an AA history");
      return aa_picard_newton_step(prob, x, *hist, config.depth);
  }
  throw std::invalid_argument("unknown method");
}

IterationHistory iterate(const DiscreteProblem& prob, const SolverConfig& config) {
  config.validate();
  const auto& data = prob.data();
  IterationHistory out;
  State x = prob.initial_state();
  std::optional<AAHistory> hist;
  if (config.method == Method::aa_picard_newton) hist.emplace(make_aa_history(prob, config.depth));

  using clock = std::chrono::steady_clock;
  for (int k = 1; k <= config.max_iters; ++k) {
    const auto start = clock::now();
    IterationRecord rec;
    rec.iteration = k;
    std::optional<State> next;
    try {
      next = apply_step(prob, config, x, hist ? &*hist : nullptr);
    } catch (const LinearSolveError& e) {
      out.message = e.what();
    }
    if (next) {
      rec.residual = b_norm_diff(prob.disc(), *next, x, data.nu, data.kappa);
      rec.grad_u = gradient_norm(prob.disc(), next->u);
      rec.grad_T = gradient_norm(prob.disc(), next->T);
    } else {
      rec.residual = rec.grad_u = rec.grad_T = std::numeric_limits<double>::infinity();
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();

    const bool blown = !std::isfinite(rec.residual) || !std::isfinite(rec.grad_u) ||
                       !std::isfinite(rec.grad_T) || rec.residual > config.blowup_threshold ||
                       rec.grad_u > config.blowup_threshold;
    if (blown) {
      rec.status = Status::diverged;
      if (out.message.empty()) out.message = "iterate exceeded the blow-up threshold";
    } else if (rec.residual < config.tolerance) {
      rec.status = Status::converged;
    } else if (k == config.max_iters) {
      rec.status = Status::max_iters;
    }
    out.records.push_back(rec);
    if (next && next->u.allFinite() && next->T.allFinite() && next->p.allFinite()) x = std::move(*next);
    if (rec.status != Status::running) {
      out.status = rec.status;
      break;
    }
  }
  out.final_state = std::move(x);
  return out;
}

namespace {

std::vector<double> usable_tail(std::span<const double> residuals, int window) {
  const double floor = 100.0 * std::numeric_limits<double>::epsilon();
  std::size_t end = residuals.size();
  while (end > 0 && !(residuals[end - 1] > floor)) --end;
  std::vector<double> tail;
  for (std::size_t i = end; i > 0 && static_cast<int>(tail.size()) < window; --i) {
    const double r = residuals[i - 1];
    if (!(r > floor) || !std::isfinite(r)) break;
    tail.push_back(r);
  }
  std::reverse(tail.begin(), tail.end());
  return tail;
}

}  // namespace

std::optional<double> estimate_order(std::span<const double> residuals, int window) {
  const auto tail = usable_tail(residuals, window);
  if (tail.size() < 4) return std::nullopt;
  const std::size_t m = tail.size() - 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(tail[i]), y = std::log(tail[i + 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) return std::nullopt;
  return (m * sxy - sx * sy) / denom;
}

std::optional<double> estimate_order(const IterationHistory& hist, int window) {
  const auto r = hist.residuals();
  return estimate_order(std::span<const double>(r), window);
}

std::optional<double> estimate_ratio(std::span<const double> residuals, int window) {
  const auto tail = usable_tail(residuals, window);
  if (tail.size() < 4) return std::nullopt;
  return std::pow(tail.back() / tail.front(), 1.0 / static_cast<double>(tail.size() - 1));
}

}  // namespace bouss
