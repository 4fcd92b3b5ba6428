#include "boussinesq/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <tuple>

namespace bouss {

MeshStats mesh_stats(const Mesh& mesh) {
  MeshStats s;
  s.vertices = static_cast<int>(mesh.num_vertices());
  s.triangles = static_cast<int>(mesh.num_triangles());
  s.boundary_edges = static_cast<int>(mesh.boundary_edges().size());
  s.h = mesh.max_diameter();
  s.area = mesh.total_area();
  return s;
}

ProblemData BenchmarkCase::problem(double ra) const {
  if (!std::isfinite(ra) || ra < 0.0) {
    throw std::invalid_argument("Rayleigh number must be finite and >= 0, got " + format_double(ra));
  }
  const double ri = richardson_from_rayleigh(ra, nu, kappa);
  // the shortcut must agree with Ra = Ri Re^2 Pr
  const double back = rayleigh_from_richardson(ri, nu, kappa);
  if (std::abs(back - ra) > 1e-12 * std::max(1.0, ra)) {
    throw std::logic_error("Ra/Ri mapping mismatch for " + name);
  }
  ProblemData d = make_data(nu, kappa, ri);
  d.nu = nu;
  d.kappa = kappa;
  d.ri = ri;
  return d;
}

namespace {

void attach_meshes(BenchmarkCase& bc, Mesh base, bool refine) {
  auto b = std::make_shared<const Mesh>(std::move(base));
  bc.base_mesh = b;
  bc.mesh = refine ? std::make_shared<const Mesh>(barycentric_refine(*b)) : b;
  bc.barycentric = refine;
  if (!refine) bc.notes.push_back("no barycentric refinement: the pressure space is not inf-sup stable");
}

ProblemData complex_data() {
  ProblemData d;
  d.temperature_bc[kTagBottom] = TemperatureCondition::dirichlet([](const Point& p) { return 2.0 * p.x / 7.0; });
  d.temperature_bc[kTagTop] = TemperatureCondition::dirichlet(1.0);
  return d;
}

// Remaining tags of a complex-cavity mesh are insulated.
BenchmarkCase::DataFactory complex_factory(std::vector<int> tags) {
  return [tags = std::move(tags)](double, double, double) {
    ProblemData d = complex_data();
    for (int t : tags)
      if (!d.temperature_bc.count(t)) d.temperature_bc[t] = TemperatureCondition::neumann();
    return d;
  };
}

}  // namespace

BenchmarkCase heated_cavity_case(int n, bool refine) {
  if (n < 2) throw std::invalid_argument("cavity case needs n >= 2, got " + std::to_string(n));
  BenchmarkCase bc;
  bc.name = "cavity";
  attach_meshes(bc, generate_unit_square_mesh(n), refine);
  bc.boundary_conditions =
      "u = 0 on all walls; T = 0 on x = 0, T = 1 on x = 1; dT/dn = 0 on y = 0 and y = 1";
  bc.notes.push_back(
      "insulated walls are top and bottom; the heated walls carry Dirichlet data");
  bc.make_data = [](double, double, double) {
    ProblemData d;
    d.temperature_bc[kTagLeft] = TemperatureCondition::dirichlet(0.0);
    d.temperature_bc[kTagRight] = TemperatureCondition::dirichlet(1.0);
    d.temperature_bc[kTagTop] = TemperatureCondition::neumann();
    d.temperature_bc[kTagBottom] = TemperatureCondition::neumann();
    return d;
  };
  return bc;
}

BenchmarkCase complex_cavity_case(int n, bool refine) {
  if (n < 2) throw std::invalid_argument("complex case needs n >= 2, got " + std::to_string(n));
  BenchmarkCase bc;
  bc.name = "complex";
  const int ny = std::max(1, static_cast<int>(std::lround(n / 7.0)));
  attach_meshes(bc, generate_rectangle_mesh(7.0, 1.0, n, ny), refine);
  bc.boundary_conditions = "u = 0 on all walls; T = 1 on y = 1, T = 2x/7 on y = 0; dT/dn = 0 on the sides";
  bc.notes.push_back("built-in geometry is the 7x1 rectangle, an approximation of the original domain");
  bc.make_data = complex_factory(bc.mesh->tags());
  return bc;
}

BenchmarkCase complex_cavity_case(const std::filesystem::path& mesh_file, bool refine) {
  BenchmarkCase bc;
  bc.name = "file:" + mesh_file.string();
  attach_meshes(bc, load_mesh(mesh_file), refine);
  const auto tags = bc.mesh->tags();
  for (int needed : {kTagBottom, kTagTop}) {
    if (std::find(tags.begin(), tags.end(), needed) == tags.end()) {
      throw MeshError(mesh_file.string() + ": complex cavity needs boundary tag " + std::to_string(needed));
    }
  }
  bc.boundary_conditions = "u = 0 on all walls; T = 1 on tag 3, T = 2x/7 on tag 1; dT/dn = 0 on other tags";
  bc.make_data = complex_factory(tags);
  return bc;
}

namespace mms {
namespace {
using std::numbers::pi;

// psi = a(x) b(y) with a = x^2 (1-x)^2
struct Poly {
  double v, d1, d2, d3;
};
Poly quartic(double s) {
  return {s * s * (1 - s) * (1 - s), 2 * s * (1 - s) * (1 - 2 * s), 2 * (1 - 6 * s + 6 * s * s),
          12 * (2 * s - 1)};
}
}  // namespace

std::array<double, 2> velocity(const Point& x) {
  const Poly a = quartic(x.x), b = quartic(x.y);
  return {a.v * b.d1, -a.d1 * b.v};
}

std::array<double, 4> velocity_gradient(const Point& x) {
  const Poly a = quartic(x.x), b = quartic(x.y);
  return {a.d1 * b.d1, a.v * b.d2, -a.d2 * b.v, -a.d1 * b.d1};
}

std::array<double, 2> velocity_laplacian(const Point& x) {
  const Poly a = quartic(x.x), b = quartic(x.y);
  return {a.d2 * b.d1 + a.v * b.d3, -a.d3 * b.v - a.d1 * b.d2};
}

double pressure(const Point& x) { return std::sin(pi * x.x) * std::cos(pi * x.y); }

std::array<double, 2> pressure_gradient(const Point& x) {
  return {pi * std::cos(pi * x.x) * std::cos(pi * x.y), -pi * std::sin(pi * x.x) * std::sin(pi * x.y)};
}

double temperature(const Point& x) { return std::cos(pi * x.x) * std::cos(pi * x.y); }

std::array<double, 2> temperature_gradient(const Point& x) {
  return {-pi * std::sin(pi * x.x) * std::cos(pi * x.y), -pi * std::cos(pi * x.x) * std::sin(pi * x.y)};
}

double temperature_laplacian(const Point& x) { return -2.0 * pi * pi * temperature(x); }

std::array<double, 2> momentum_source(const Point& x, double nu, double ri) {
  const auto u = velocity(x);
  const auto g = velocity_gradient(x);
  const auto lap = velocity_laplacian(x);
  const auto gp = pressure_gradient(x);
  return {-nu * lap[0] + u[0] * g[0] + u[1] * g[1] + gp[0],
          -nu * lap[1] + u[0] * g[2] + u[1] * g[3] + gp[1] - ri * temperature(x)};
}

double heat_source(const Point& x, double kappa) {
  const auto u = velocity(x);
  const auto gt = temperature_gradient(x);
  return -kappa * temperature_laplacian(x) + u[0] * gt[0] + u[1] * gt[1];
}

}  // namespace mms

BenchmarkCase mms_case(int n, bool refine) {
  if (n < 2) throw std::invalid_argument("mms case needs n >= 2, got " + std::to_string(n));
  BenchmarkCase bc;
  bc.name = "mms";
  attach_meshes(bc, generate_unit_square_mesh(n), refine);
  bc.boundary_conditions = "u = 0 on all walls; exact T on x = 0 and x = 1; dT/dn = 0 on y = 0 and y = 1";
  bc.make_data = [](double nu, double kappa, double ri) {
    ProblemData d;
    d.f = [nu, ri](const Point& x) { return mms::momentum_source(x, nu, ri); };
    d.g = [kappa](const Point& x) { return mms::heat_source(x, kappa); };
    d.temperature_bc[kTagLeft] = TemperatureCondition::dirichlet(mms::temperature);
    d.temperature_bc[kTagRight] = TemperatureCondition::dirichlet(mms::temperature);
    d.temperature_bc[kTagTop] = TemperatureCondition::neumann();
    d.temperature_bc[kTagBottom] = TemperatureCondition::neumann();
    return d;
  };
  return bc;
}

MmsStudy run_mms_study(const std::vector<int>& levels, const SolverConfig& config, double ra, bool refine) {
  if (levels.size() < 2) throw std::invalid_argument("mms study needs at least two mesh levels");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1]) throw std::invalid_argument("mms levels must be strictly ascending");

  MmsStudy study;
  for (int n : levels) {
    const BenchmarkCase bc = mms_case(n, refine);
    const DiscreteProblem prob(bc.mesh, bc.problem(ra));
    IterationHistory hist = iterate(prob, config);
    const auto& disc = prob.disc();
    const State x = std::move(hist.final_state);
    hist.final_state = State{};

    MmsLevel lv;
    lv.n = n;
    lv.h = 1.0 / n;
    lv.velocity = velocity_errors(disc, x.u, mms::velocity, mms::velocity_gradient);
    lv.temperature = scalar_errors(disc, x.T, mms::temperature, mms::temperature_gradient);
    lv.pressure_l2 = pressure_error(disc, x.p, mms::pressure);
    lv.divergence = divergence_norm(disc, x.u);
    lv.history = std::move(hist);
    study.levels.push_back(std::move(lv));
  }
  auto order = [](double e0, double e1, double h0, double h1) { return std::log(e0 / e1) / std::log(h0 / h1); };
  for (std::size_t i = 0; i + 1 < study.levels.size(); ++i) {
    const auto& a = study.levels[i];
    const auto& b = study.levels[i + 1];
    study.velocity_h1_order.push_back(order(a.velocity.h1, b.velocity.h1, a.h, b.h));
    study.velocity_l2_order.push_back(order(a.velocity.l2, b.velocity.l2, a.h, b.h));
    study.temperature_h1_order.push_back(order(a.temperature.h1, b.temperature.h1, a.h, b.h));
    study.pressure_l2_order.push_back(order(a.pressure_l2, b.pressure_l2, a.h, b.h));
  }
  return study;
}

std::string to_string(const MethodVariant& v) {
  std::string s = to_string(v.method);
  if (v.method == Method::aa_picard_newton) s += "[m=" + std::to_string(v.depth) + "]";
  return s;
}

std::vector<MethodVariant> expand_variants(const std::vector<Method>& methods, const std::vector<int>& depths) {
  std::vector<MethodVariant> out;
  for (Method m : methods) {
    if (m == Method::aa_picard_newton) {
      if (depths.empty()) throw std::invalid_argument("aa-picard-newton needs at least one depth");
      for (int d : depths) {
        if (d < 0) throw std::invalid_argument("depth must be non-negative");
        out.push_back({m, d});
      }
    } else {
      out.push_back({m, 0});
    }
  }
  std::vector<MethodVariant> uniq;
  for (const auto& v : out)
    if (std::find(uniq.begin(), uniq.end(), v) == uniq.end()) uniq.push_back(v);
  return uniq;
}

RunResult run_case(const BenchmarkCase& bc, const MethodVariant& variant, double ra,
                   const SolverConfig& solver, bool keep_state) {
  SolverConfig cfg = solver;
  cfg.method = variant.method;
  cfg.depth = variant.depth;
  const DiscreteProblem prob(bc.mesh, bc.problem(ra));
  RunResult r{bc.name, variant, ra, iterate(prob, cfg)};
  if (!keep_state) r.history.final_state = State{};
  return r;
}

namespace {

auto run_key(const RunResult& r) {
  return std::make_tuple(r.case_name, static_cast<int>(r.variant.method), r.variant.depth, r.ra);
}

}  // namespace

std::vector<FrontierEntry> compute_frontier(const std::vector<RunResult>& runs) {
  std::map<std::tuple<std::string, int, int>, FrontierEntry> acc;
  for (const auto& r : runs) {
    const auto key = std::make_tuple(r.case_name, static_cast<int>(r.variant.method), r.variant.depth);
    auto [it, inserted] = acc.try_emplace(key, FrontierEntry{r.case_name, r.variant, std::nullopt});
    if (r.history.status == Status::converged) {
      auto& best = it->second.max_ra;
      if (!best || r.ra > *best) best = r.ra;
    }
  }
  std::vector<FrontierEntry> out;
  for (auto& [k, v] : acc) out.push_back(std::move(v));
  return out;
}

SweepResult sweep(const BenchmarkCase& bc, const std::vector<MethodVariant>& variants,
                  const std::vector<double>& ra_list, const SweepOptions& options) {
  if (ra_list.empty()) throw std::invalid_argument("sweep needs at least one Ra value");
  for (std::size_t i = 0; i < ra_list.size(); ++i) {
    if (!std::isfinite(ra_list[i]) || ra_list[i] < 0.0)
      throw std::invalid_argument("Ra values must be finite and >= 0");
    if (i > 0 && !(ra_list[i] > ra_list[i - 1])) throw std::invalid_argument("Ra list must be strictly ascending");
  }
  if (variants.empty()) throw std::invalid_argument("sweep needs at least one method");
  options.solver.validate();
  for (double ra : ra_list) bc.problem(ra);  // fail early on bad data

  std::vector<std::pair<MethodVariant, double>> jobs;
  for (const auto& v : variants)
    for (double ra : ra_list) jobs.emplace_back(v, ra);

  SweepResult result;
  result.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        result.runs[i] = run_case(bc, jobs[i].first, jobs[i].second, options.solver, options.keep_states);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(options.jobs, static_cast<int>(jobs.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  std::sort(result.runs.begin(), result.runs.end(),
            [](const RunResult& a, const RunResult& b) { return run_key(a) < run_key(b); });
  result.frontier = compute_frontier(result.runs);
  return result;
}

double refine_frontier(const BenchmarkCase& bc, const MethodVariant& variant, double converged_ra,
                       double failed_ra, double granularity, const SolverConfig& solver,
                       std::vector<RunResult>* runs) {
  if (!(granularity > 0.0)) throw std::invalid_argument("granularity must be positive");
  if (!(failed_ra > converged_ra)) throw std::invalid_argument("failed Ra must exceed converged Ra");
  double lo = converged_ra, hi = failed_ra;
  while (true) {
    // midpoint snapped to the granularity grid, strictly inside (lo, hi)
    double mid = std::round(0.5 * (lo + hi) / granularity) * granularity;
    if (!(mid > lo)) mid = std::ceil(lo / granularity + 1e-9) * granularity;
    if (!(mid < hi)) break;
    RunResult r = run_case(bc, variant, mid, solver, false);
    const bool ok = r.history.status == Status::converged;
    if (runs) runs->push_back(std::move(r));
    (ok ? lo : hi) = mid;
  }
  return lo;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw CsvError("write failed for " + path.string());
}

// No quoting: case names with commas are rejected instead.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") != std::string::npos)
    throw CsvError("value '" + s + "' cannot be written to CSV without quoting");
  return s;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::out_of_range&) {
    return s.find('-') == 0 ? -HUGE_VAL : HUGE_VAL;
  } catch (const std::exception&) {
  }
  throw CsvError(where + ": not a number: '" + s + "'");
}

int parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw CsvError(where + ": not an integer: '" + s + "'");
}

struct CsvReader {
  std::ifstream in;
  std::filesystem::path path;
  int lineno = 0;

  CsvReader(const std::filesystem::path& p, const char* header) : in(p), path(p) {
    if (!in) throw CsvError("cannot open " + p.string());
    std::string line;
    if (!next(line) || line != header)
      throw CsvError(p.string() + ": expected header '" + std::string(header) + "'");
  }
  bool next(std::string& line) {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  std::string where() const { return path.string() + ":" + std::to_string(lineno); }
};

MethodVariant parse_variant(const std::string& method, const std::string& depth, const std::string& where) {
  const auto m = parse_method(method);
  if (!m) throw CsvError(where + ": unknown method '" + method + "'");
  return {*m, parse_int(depth, where)};
}

}  // namespace

void write_runs_csv(const std::vector<RunResult>& runs, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << kRunsCsvHeader << '\n';
  for (const auto& r : runs) {
    const std::string prefix = csv_field(r.case_name) + "," + to_string(r.variant.method) + "," +
                               std::to_string(r.variant.depth) + "," + format_double(r.ra) + ",";
    for (const auto& rec : r.history.records) {
      out << prefix << rec.iteration << ',' << format_double(rec.residual) << ',' << format_double(rec.grad_u)
          << ',' << format_double(rec.grad_T) << ',' << format_double(rec.wall_ms) << ',' << to_string(rec.status)
          << '\n';
    }
  }
  finish(out, path);
}

void write_frontier_csv(const std::vector<FrontierEntry>& frontier, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << kFrontierCsvHeader << '\n';
  for (const auto& f : frontier) {
    out << csv_field(f.case_name) << ',' << to_string(f.variant.method) << ',' << f.variant.depth << ','
        << (f.max_ra ? format_double(*f.max_ra) : std::string("none")) << '\n';
  }
  finish(out, path);
}

void write_csv(const SweepResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw CsvError("cannot create directory " + dir.string() + ": " + ec.message());
  write_runs_csv(result.runs, dir / "runs.csv");
  write_frontier_csv(result.frontier, dir / "frontier.csv");
}

std::vector<RunResult> read_runs_csv(const std::filesystem::path& path) {
  CsvReader rd(path, kRunsCsvHeader);
  std::vector<RunResult> runs;
  std::string line;
  while (rd.next(line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    const auto where = rd.where();
    if (f.size() != 10) throw CsvError(where + ": expected 10 fields, got " + std::to_string(f.size()));
    const MethodVariant v = parse_variant(f[1], f[2], where);
    const double ra = parse_double(f[3], where);
    IterationRecord rec;
    rec.iteration = parse_int(f[4], where);
    rec.residual = parse_double(f[5], where);
    rec.grad_u = parse_double(f[6], where);
    rec.grad_T = parse_double(f[7], where);
    rec.wall_ms = parse_double(f[8], where);
    const auto st = parse_status(f[9]);
    if (!st) throw CsvError(where + ": unknown status '" + f[9] + "'");
    rec.status = *st;

    const bool same = !runs.empty() && runs.back().case_name == f[0] && runs.back().variant == v &&
                      runs.back().ra == ra && runs.back().history.status == Status::running;
    if (!same) runs.push_back(RunResult{f[0], v, ra, {}});
    auto& h = runs.back().history;
    h.records.push_back(rec);
    h.status = rec.status;
  }
  return runs;
}

std::vector<FrontierEntry> read_frontier_csv(const std::filesystem::path& path) {
  CsvReader rd(path, kFrontierCsvHeader);
  std::vector<FrontierEntry> out;
  std::string line;
  while (rd.next(line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    const auto where = rd.where();
    if (f.size() != 4) throw CsvError(where + ": expected 4 fields, got " + std::to_string(f.size()));
    FrontierEntry e{f[0], parse_variant(f[1], f[2], where), std::nullopt};
    if (f[3] != "none") e.max_ra = parse_double(f[3], where);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace bouss
