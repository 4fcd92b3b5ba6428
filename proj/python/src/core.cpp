#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "boussinesq/cli.hpp"

namespace py = pybind11;
using namespace bouss;
using nlohmann::json;

namespace {

// Options go through the CLI config layer so Python and the tool validate alike.
CliConfig make_config(const std::string& case_spec, int n, bool barycentric) {
  CliConfig cfg;
  apply_config_json(cfg, json{{"case", case_spec}, {"n", n}, {"barycentric", barycentric}});
  return cfg;
}

SolverConfig make_solver(const std::string& method, int depth, double tolerance, int max_iters, double blowup) {
  CliConfig cfg;
  apply_config_json(cfg, json{{"method", method},
                              {"depth", depth},
                              {"tolerance", tolerance},
                              {"max_iters", max_iters},
                              {"blowup", blowup}});
  return solver_config(cfg);
}

py::dict stats_dict(const Mesh& m) {
  const MeshStats s = mesh_stats(m);
  py::dict d;
  d["vertices"] = s.vertices;
  d["triangles"] = s.triangles;
  d["boundary_edges"] = s.boundary_edges;
  d["h"] = s.h;
  d["area"] = s.area;
  return d;
}

py::dict history_dict(const IterationHistory& h) {
  const auto n = h.records.size();
  Eigen::VectorXd res(n), gu(n), gt(n), ms(n);
  for (std::size_t i = 0; i < n; ++i) {
    res[i] = h.records[i].residual;
    gu[i] = h.records[i].grad_u;
    gt[i] = h.records[i].grad_T;
    ms[i] = h.records[i].wall_ms;
  }
  py::dict d;
  d["status"] = to_string(h.status);
  d["iterations"] = h.iterations();
  d["residuals"] = res;
  d["grad_u"] = gu;
  d["grad_T"] = gt;
  d["wall_ms"] = ms;
  d["message"] = h.message;
  return d;
}

py::dict run_dict(const RunResult& r) {
  py::dict d = history_dict(r.history);
  d["case"] = r.case_name;
  d["method"] = to_string(r.variant.method);
  d["depth"] = r.variant.depth;
  d["ra"] = r.ra;
  return d;
}

py::list frontier_list(const std::vector<FrontierEntry>& f) {
  py::list out;
  for (const auto& e : f) {
    py::dict d;
    d["case"] = e.case_name;
    d["method"] = to_string(e.variant.method);
    d["depth"] = e.variant.depth;
    d["max_ra"] = e.max_ra ? py::cast(*e.max_ra) : py::none();
    out.append(d);
  }
  return out;
}

py::dict solve(const std::string& case_spec, const std::string& method, double ra, int n, int depth,
               double tolerance, int max_iters, double blowup, bool barycentric) {
  const BenchmarkCase bc = make_case(make_config(case_spec, n, barycentric));
  const SolverConfig sc = make_solver(method, depth, tolerance, max_iters, blowup);
  const MethodVariant v{sc.method, sc.method == Method::aa_picard_newton ? sc.depth : 0};
  RunResult r;
  {
    py::gil_scoped_release release;
    r = run_case(bc, v, ra, sc, true);
  }
  py::dict d = run_dict(r);
  const DiscreteProblem prob(bc.mesh, bc.problem(ra));
  const auto& disc = prob.disc();
  Eigen::MatrixX2d nodes(disc.num_nodes(), 2);
  for (int i = 0; i < disc.num_nodes(); ++i) nodes.row(i) << disc.node(i).x, disc.node(i).y;
  const int nn = disc.num_nodes();
  const State& s = r.history.final_state;
  Eigen::MatrixX2d u(nn, 2);
  u.col(0) = s.u.head(nn);
  u.col(1) = s.u.tail(nn);
  d["nodes"] = nodes;
  d["u"] = u;
  d["T"] = s.T;
  d["p"] = s.p;
  d["divergence_norm"] = divergence_norm(disc, s.u);
  return d;
}

py::dict sweep_py(const std::string& case_spec, const std::vector<std::string>& methods, const std::vector<int>& depths,
                  const std::vector<double>& ra_list, int n, double tolerance, int max_iters, double blowup,
                  int jobs, bool barycentric, const std::optional<std::filesystem::path>& out) {
  CliConfig cfg = make_config(case_spec, n, barycentric);
  apply_config_json(cfg, json{{"method", methods},
                              {"depth", depths},
                              {"ra_list", ra_list},
                              {"tolerance", tolerance},
                              {"max_iters", max_iters},
                              {"blowup", blowup},
                              {"jobs", jobs}});
  if (cfg.ra_list.empty()) throw ConfigError("ra_list", "list must not be empty");
  const BenchmarkCase bc = make_case(cfg);
  std::vector<Method> ms;
  for (const auto& m : cfg.methods) ms.push_back(*parse_method(m));
  SweepOptions opt;
  opt.solver = solver_config(cfg);
  opt.jobs = cfg.jobs;
  SweepResult res;
  {
    py::gil_scoped_release release;
    res = sweep(bc, expand_variants(ms, cfg.depths), cfg.ra_list, opt);
    if (out) write_csv(res, *out);
  }
  py::list runs;
  for (const auto& r : res.runs) runs.append(run_dict(r));
  py::dict d;
  d["runs"] = runs;
  d["frontier"] = frontier_list(res.frontier);
  return d;
}

py::dict mms_py(const std::vector<int>& levels, const std::string& method, int depth, double ra, double tolerance,
                int max_iters, bool barycentric) {
  const SolverConfig sc = make_solver(method, depth, tolerance, max_iters, 1e10);
  MmsStudy st;
  {
    py::gil_scoped_release release;
    st = run_mms_study(levels, sc, ra, barycentric);
  }
  py::list lv;
  for (const auto& l : st.levels) {
    py::dict d;
    d["n"] = l.n;
    d["h"] = l.h;
    d["status"] = to_string(l.history.status);
    d["velocity_h1"] = l.velocity.h1;
    d["velocity_l2"] = l.velocity.l2;
    d["temperature_h1"] = l.temperature.h1;
    d["temperature_l2"] = l.temperature.l2;
    d["pressure_l2"] = l.pressure_l2;
    d["divergence"] = l.divergence;
    lv.append(d);
  }
  py::dict out;
  out["levels"] = lv;
  out["velocity_h1_order"] = st.velocity_h1_order;
  out["velocity_l2_order"] = st.velocity_l2_order;
  out["temperature_h1_order"] = st.temperature_h1_order;
  out["pressure_l2_order"] = st.pressure_l2_order;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Steady Boussinesq solver (P2/P1disc Scott-Vogelius on barycentric meshes)";
  m.attr("__version__") = tool_version();
  m.attr("RUNS_CSV_HEADER") = kRunsCsvHeader;
  m.attr("FRONTIER_CSV_HEADER") = kFrontierCsvHeader;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<LinearSolveError>(m, "LinearSolveError", PyExc_RuntimeError);
  py::register_exception<CsvError>(m, "CsvError", PyExc_OSError);
  auto mesh_error = py::register_exception<MeshError>(m, "MeshError", PyExc_ValueError);
  (void)mesh_error;

  m.def("methods", &method_names, "Valid method names.");

  m.def("linear_solver", &direct_solver_backend);

  m.def(
      "mesh_stats",
      [](const std::string& case_spec, int n, bool barycentric) {
        const BenchmarkCase bc = make_case(make_config(case_spec, n, barycentric));
        py::dict d;
        d["case"] = bc.name;
        d["base"] = stats_dict(*bc.base_mesh);
        d["solved"] = stats_dict(*bc.mesh);
        return d;
      },
      py::arg("case") = "cavity", py::arg("n") = 16, py::arg("barycentric") = true);

  m.def("solve", &solve, py::arg("case") = "cavity", py::arg("method") = "picard-newton", py::arg("ra") = 1e4,
        py::arg("n") = 16, py::arg("depth") = 1, py::arg("tolerance") = 1e-8, py::arg("max_iters") = 200,
        py::arg("blowup") = 1e10, py::arg("barycentric") = true,
        "Solve one problem. Returns status, per-iteration history and the final fields at the P2 nodes.");

  m.def("sweep", &sweep_py, py::arg("case") = "cavity", py::arg("methods") = std::vector<std::string>{"picard-newton"},
        py::arg("depths") = std::vector<int>{1}, py::arg("ra_list"), py::arg("n") = 16, py::arg("tolerance") = 1e-8,
        py::arg("max_iters") = 200, py::arg("blowup") = 1e10, py::arg("jobs") = 1, py::arg("barycentric") = true,
        py::arg("out") = py::none(),
        "Run every (method, depth, Ra) combination; optionally write runs.csv/frontier.csv into `out`.");

  m.def("mms_study", &mms_py, py::arg("levels") = std::vector<int>{8, 16, 32}, py::arg("method") = "picard-newton",
        py::arg("depth") = 1, py::arg("ra") = 100.0, py::arg("tolerance") = 1e-10, py::arg("max_iters") = 200,
        py::arg("barycentric") = true);

  m.def(
      "estimate_order",
      [](const std::vector<double>& r, int window) -> std::optional<double> { return estimate_order(r, window); },
      py::arg("residuals"), py::arg("window") = 4);

  m.def(
      "read_runs_csv",
      [](const std::filesystem::path& p) {
        py::list out;
        for (const auto& r : read_runs_csv(p)) out.append(run_dict(r));
        return out;
      },
      py::arg("path"));
  m.def(
      "read_frontier_csv", [](const std::filesystem::path& p) { return frontier_list(read_frontier_csv(p)); },
      py::arg("path"));

  m.def(
      "cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "bouss");
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process. Returns (exit_code, stdout, stderr).");
}
