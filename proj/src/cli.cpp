#include "boussinesq/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#ifndef BOUSS_VERSION
#define BOUSS_VERSION "0.0.0"
#endif

namespace bouss {

using nlohmann::json;

const char* tool_version() { return BOUSS_VERSION; }

std::vector<std::string> config_keys() {
  return {"case", "method", "depth", "ra", "ra_list", "n", "barycentric", "tolerance",
          "max_iters", "blowup", "jobs", "out", "levels", "refine"};
}

namespace {

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where, "expected a number, got " + v.dump());
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where, "must be finite");
  return d;
}

int get_int(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 2e9) return static_cast<int>(d);
  }
  throw ConfigError(where, "expected an integer, got " + v.dump());
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where, "expected a string, got " + v.dump());
  return v.get<std::string>();
}

// A scalar or an array; a string scalar may hold a comma-separated list.
template <typename F>
void for_each_item(const json& v, const std::string& where, F&& fn) {
  if (v.is_array()) {
    if (v.empty()) throw ConfigError(where, "list must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) fn(v[i], where + "/" + std::to_string(i));
  } else {
    fn(v, where);
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

std::string pointer_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

void check_case(const std::string& spec, const std::string& where) {
  if (spec == "cavity" || spec == "complex" || spec == "mms") return;
  if (spec.rfind("file:", 0) == 0 && spec.size() > 5) return;
  throw ConfigError(where, "unknown case '" + spec + "' (valid: cavity, complex, mms, file:<path>)");
}

}  // namespace

void apply_config_value(CliConfig& cfg, const std::string& key, const json& v, const std::string& where) {
  if (key == "case") {
    cfg.case_spec = get_string(v, where);
    check_case(cfg.case_spec, where);
  } else if (key == "method") {
    std::vector<std::string> methods;
    for_each_item(v, where, [&](const json& item, const std::string& w) {
      for (const auto& name : split_commas(get_string(item, w))) {
        if (!parse_method(name)) {
          throw ConfigError(w, "unknown method '" + name + "' (valid: " + join(method_names()) + ")");
        }
        methods.push_back(name);
      }
    });
    cfg.methods = methods;
  } else if (key == "depth") {
    std::vector<int> depths;
    for_each_item(v, where, [&](const json& item, const std::string& w) {
      const int d = get_int(item, w);
      if (d < 0) throw ConfigError(w, "depth must be >= 0, got " + std::to_string(d));
      depths.push_back(d);
    });
    cfg.depths = depths;
  } else if (key == "ra") {
    const double ra = get_number(v, where);
    if (ra < 0.0) throw ConfigError(where, "Rayleigh number must be >= 0, got " + format_double(ra));
    cfg.ra = ra;
  } else if (key == "ra_list") {
    std::vector<double> list;
    // empty means the default sweep grid
    if (v.is_array() && v.empty()) {
      cfg.ra_list.clear();
      return;
    }
    for_each_item(v, where, [&](const json& item, const std::string& w) {
      const double ra = get_number(item, w);
      if (ra < 0.0) throw ConfigError(w, "Rayleigh number must be >= 0, got " + format_double(ra));
      if (!list.empty() && !(ra > list.back())) throw ConfigError(w, "Ra list must be strictly ascending");
      list.push_back(ra);
    });
    cfg.ra_list = list;
  } else if (key == "n") {
    const int n = get_int(v, where);
    if (n < 2) throw ConfigError(where, "n must be >= 2, got " + std::to_string(n));
    cfg.n = n;
  } else if (key == "barycentric") {
    if (!v.is_boolean()) throw ConfigError(where, "expected true or false, got " + v.dump());
    cfg.barycentric = v.get<bool>();
  } else if (key == "tolerance") {
    const double t = get_number(v, where);
    if (!(t > 0.0)) throw ConfigError(where, "tolerance must be > 0");
    cfg.tolerance = t;
  } else if (key == "max_iters") {
    const int m = get_int(v, where);
    if (m < 1) throw ConfigError(where, "max_iters must be >= 1");
    cfg.max_iters = m;
  } else if (key == "blowup") {
    const double b = get_number(v, where);
    if (!(b > 0.0)) throw ConfigError(where, "blow-up threshold must be > 0");
    cfg.blowup = b;
  } else if (key == "jobs") {
    const int j = get_int(v, where);
    if (j < 1) throw ConfigError(where, "jobs must be >= 1");
    cfg.jobs = j;
  } else if (key == "out") {
    cfg.out = get_string(v, where);
    if (cfg.out.empty()) throw ConfigError(where, "output directory must not be empty");
  } else if (key == "levels") {
    std::vector<int> levels;
    for_each_item(v, where, [&](const json& item, const std::string& w) {
      const int n = get_int(item, w);
      if (n < 2) throw ConfigError(w, "mesh level must be >= 2");
      if (!levels.empty() && n <= levels.back()) throw ConfigError(w, "levels must be strictly ascending");
      levels.push_back(n);
    });
    if (levels.size() < 2) throw ConfigError(where, "need at least two mesh levels");
    cfg.levels = levels;
  } else if (key == "refine") {
    const double g = get_number(v, where);
    if (g < 0.0) throw ConfigError(where, "refinement granularity must be >= 0");
    cfg.refine_granularity = g;
  } else {
    throw ConfigError(where, "unknown field (valid: " + join(config_keys()) + ")");
  }
}

void apply_config_json(CliConfig& cfg, const json& obj, const std::string& prefix) {
  if (!obj.is_object()) throw ConfigError(prefix.empty() ? "/" : prefix, "expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    apply_config_value(cfg, key, value, prefix + "/" + pointer_token(key));
  }
}

CliConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
  }
  CliConfig cfg;
  if (doc.is_object() && doc.contains("config") && doc.contains("tool")) {
    apply_config_json(cfg, doc["config"], "/config");  // a run manifest
  } else {
    apply_config_json(cfg, doc);
  }
  return cfg;
}

json to_json(const CliConfig& cfg) {
  return {{"case", cfg.case_spec}, {"method", cfg.methods},   {"depth", cfg.depths},
          {"ra", cfg.ra},          {"ra_list", cfg.ra_list},  {"n", cfg.n},
          {"barycentric", cfg.barycentric}, {"tolerance", cfg.tolerance},
          {"max_iters", cfg.max_iters},     {"blowup", cfg.blowup},
          {"jobs", cfg.jobs},      {"out", cfg.out},          {"levels", cfg.levels},
          {"refine", cfg.refine_granularity}};
}

SolverConfig solver_config(const CliConfig& cfg) {
  SolverConfig s;
  s.method = *parse_method(cfg.methods.front());
  s.depth = cfg.depths.front();
  s.tolerance = cfg.tolerance;
  s.max_iters = cfg.max_iters;
  s.blowup_threshold = cfg.blowup;
  return s;
}

BenchmarkCase make_case(const CliConfig& cfg) {
  check_case(cfg.case_spec, "case");
  if (cfg.case_spec == "cavity") return heated_cavity_case(cfg.n, cfg.barycentric);
  if (cfg.case_spec == "complex") return complex_cavity_case(cfg.n, cfg.barycentric);
  if (cfg.case_spec == "mms") return mms_case(cfg.n, cfg.barycentric);
  return complex_cavity_case(std::filesystem::path(cfg.case_spec.substr(5)), cfg.barycentric);
}

namespace {

json stats_json(const Mesh& m) {
  const MeshStats s = mesh_stats(m);
  return {{"vertices", s.vertices}, {"triangles", s.triangles}, {"boundary_edges", s.boundary_edges},
          {"h", s.h},               {"area", s.area}};
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

json make_manifest(const std::string& command, const CliConfig& cfg, const BenchmarkCase& bc) {
  json m;
  m["tool"] = "bouss";
  m["version"] = tool_version();
  m["command"] = command;
  m["timestamp"] = utc_timestamp();
  m["config"] = to_json(cfg);
  m["linear_solver"] = direct_solver_backend();
  m["case"] = {{"name", bc.name},
               {"nu", bc.nu},
               {"kappa", bc.kappa},
               {"ri_per_ra", richardson_from_rayleigh(1.0, bc.nu, bc.kappa)},
               {"boundary_conditions", bc.boundary_conditions},
               {"notes", bc.notes}};
  m["mesh"] = {{"barycentric", bc.barycentric}, {"base", stats_json(*bc.base_mesh)}, {"solved", stats_json(*bc.mesh)}};
  return m;
}

namespace {

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << std::setw(2) << j << '\n';
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::filesystem::path prepare_out(const CliConfig& cfg) {
  const std::filesystem::path dir(cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

// Desk-scale default grid, 1-2-5 steps.
std::vector<double> default_ra_grid() {
  return {1e3, 2e3, 5e3, 1e4, 2e4, 5e4, 1e5, 2e5, 5e5, 1e6};
}

std::vector<MethodVariant> variants_of(const CliConfig& cfg) {
  std::vector<Method> ms;
  for (const auto& name : cfg.methods) ms.push_back(*parse_method(name));
  return expand_variants(ms, cfg.depths);
}

void print_history(std::ostream& out, const IterationHistory& h) {
  out << std::setw(5) << "iter" << std::setw(14) << "residual" << std::setw(14) << "|grad u|" << std::setw(14)
      << "|grad T|" << std::setw(11) << "ms" << '\n';
  for (const auto& r : h.records) {
    out << std::setw(5) << r.iteration << std::setw(14) << std::setprecision(4) << std::scientific << r.residual
        << std::setw(14) << r.grad_u << std::setw(14) << r.grad_T << std::setw(11) << std::fixed
        << std::setprecision(1) << r.wall_ms << '\n';
  }
  out << std::defaultfloat << std::setprecision(6);
}

int cmd_run(const CliConfig& cfg, std::ostream& out) {
  if (cfg.methods.size() != 1) throw ConfigError("--method", "run takes exactly one method");
  if (cfg.depths.size() != 1) throw ConfigError("--depth", "run takes exactly one depth");
  const BenchmarkCase bc = make_case(cfg);
  const SolverConfig sc = solver_config(cfg);
  bc.problem(cfg.ra);
  const auto dir = prepare_out(cfg);

  const MethodVariant v{sc.method, sc.method == Method::aa_picard_newton ? sc.depth : 0};
  RunResult r = run_case(bc, v, cfg.ra, sc, true);
  const DiscreteProblem prob(bc.mesh, bc.problem(cfg.ra));
  const double div = divergence_norm(prob.disc(), r.history.final_state.u);

  print_history(out, r.history);
  out << bc.name << ' ' << to_string(v) << " Ra=" << cfg.ra << ": " << to_string(r.history.status) << " after "
      << r.history.iterations() << " iterations";
  if (!r.history.message.empty() && r.history.status != Status::converged) out << " (" << r.history.message << ")";
  out << "\n|div u| = " << div << '\n';

  write_runs_csv({r}, dir / "runs.csv");
  json m = make_manifest("run", cfg, bc);
  m["result"] = {{"status", to_string(r.history.status)},
                 {"iterations", r.history.iterations()},
                 {"final_residual", r.history.records.back().residual},
                 {"divergence_norm", div},
                 {"message", r.history.message}};
  write_json(m, dir / "manifest.json");
  return r.history.status == Status::converged ? kExitOk : kExitNotConverged;
}

int cmd_sweep(CliConfig cfg, std::ostream& out) {
  if (cfg.ra_list.empty()) cfg.ra_list = default_ra_grid();
  const BenchmarkCase bc = make_case(cfg);
  const auto variants = variants_of(cfg);
  SweepOptions opt;
  opt.solver = solver_config(cfg);
  opt.jobs = cfg.jobs;
  const auto dir = prepare_out(cfg);

  SweepResult res = sweep(bc, variants, cfg.ra_list, opt);
  if (cfg.refine_granularity > 0.0) {
    for (const auto& f : std::vector<FrontierEntry>(res.frontier)) {
      if (!f.max_ra) continue;
      const auto above = std::upper_bound(cfg.ra_list.begin(), cfg.ra_list.end(), *f.max_ra);
      if (above == cfg.ra_list.end()) continue;
      refine_frontier(bc, f.variant, *f.max_ra, *above, cfg.refine_granularity, opt.solver, &res.runs);
    }
    std::sort(res.runs.begin(), res.runs.end(), [](const RunResult& a, const RunResult& b) {
      return std::make_tuple(static_cast<int>(a.variant.method), a.variant.depth, a.ra) <
             std::make_tuple(static_cast<int>(b.variant.method), b.variant.depth, b.ra);
    });
    res.frontier = compute_frontier(res.runs);
  }

  for (const auto& r : res.runs) {
    out << std::setw(22) << std::left << to_string(r.variant) << std::right << " Ra=" << std::setw(10) << r.ra
        << "  " << std::setw(9) << to_string(r.history.status) << "  iterations " << r.history.iterations() << '\n';
  }
  out << "frontier:\n";
  json frontier = json::array();
  for (const auto& f : res.frontier) {
    out << "  " << std::setw(22) << std::left << to_string(f.variant) << std::right << ' '
        << (f.max_ra ? format_double(*f.max_ra) : std::string("none")) << '\n';
    frontier.push_back({{"method", to_string(f.variant.method)},
                        {"depth", f.variant.depth},
                        {"max_ra_converged", f.max_ra ? json(*f.max_ra) : json(nullptr)}});
  }
  write_csv(res, dir);
  json m = make_manifest("sweep", cfg, bc);
  m["frontier"] = frontier;
  write_json(m, dir / "manifest.json");
  return kExitOk;
}

int cmd_mms(CliConfig cfg, std::ostream& out) {
  if (cfg.methods.size() != 1) throw ConfigError("--method", "mms takes exactly one method");
  cfg.case_spec = "mms";
  const SolverConfig sc = solver_config(cfg);
  const auto dir = prepare_out(cfg);
  const MmsStudy st = run_mms_study(cfg.levels, sc, cfg.ra, cfg.barycentric);

  std::vector<RunResult> runs;
  json levels = json::array();
  bool all_ok = true;
  out << std::setw(5) << "n" << std::setw(13) << "|u|_H1 err" << std::setw(13) << "|u|_L2 err" << std::setw(13)
      << "|T|_H1 err" << std::setw(13) << "|p|_L2 err" << std::setw(13) << "|div u|" << '\n';
  for (const auto& lv : st.levels) {
    all_ok = all_ok && lv.history.status == Status::converged;
    out << std::setw(5) << lv.n << std::scientific << std::setprecision(4) << std::setw(13) << lv.velocity.h1
        << std::setw(13) << lv.velocity.l2 << std::setw(13) << lv.temperature.h1 << std::setw(13) << lv.pressure_l2
        << std::setw(13) << lv.divergence << std::defaultfloat << '\n';
    levels.push_back({{"n", lv.n},
                      {"h", lv.h},
                      {"status", to_string(lv.history.status)},
                      {"iterations", lv.history.iterations()},
                      {"velocity_h1", lv.velocity.h1},
                      {"velocity_l2", lv.velocity.l2},
                      {"temperature_h1", lv.temperature.h1},
                      {"temperature_l2", lv.temperature.l2},
                      {"pressure_l2", lv.pressure_l2},
                      {"divergence", lv.divergence}});
  }
  out << "orders:";
  for (std::size_t i = 0; i < st.velocity_h1_order.size(); ++i) {
    out << "\n  " << st.levels[i].n << "->" << st.levels[i + 1].n << std::fixed << std::setprecision(3)
        << "  u H1 " << st.velocity_h1_order[i] << "  u L2 " << st.velocity_l2_order[i] << "  T H1 "
        << st.temperature_h1_order[i] << "  p L2 " << st.pressure_l2_order[i] << std::defaultfloat;
  }
  out << '\n';

  // one run per mesh level
  const MethodVariant v{sc.method, sc.method == Method::aa_picard_newton ? sc.depth : 0};
  for (const auto& lv : st.levels) runs.push_back({"mms/n" + std::to_string(lv.n), v, cfg.ra, lv.history});
  write_runs_csv(runs, dir / "runs.csv");

  CliConfig shown = cfg;
  shown.n = cfg.levels.front();
  json m = make_manifest("mms", shown, mms_case(cfg.levels.front(), cfg.barycentric));
  m["levels"] = levels;
  m["orders"] = {{"velocity_h1", st.velocity_h1_order},
                 {"velocity_l2", st.velocity_l2_order},
                 {"temperature_h1", st.temperature_h1_order},
                 {"pressure_l2", st.pressure_l2_order}};
  write_json(m, dir / "manifest.json");
  return all_ok ? kExitOk : kExitNotConverged;
}

int cmd_mesh_info(const CliConfig& cfg, std::ostream& out) {
  const BenchmarkCase bc = make_case(cfg);
  json j = {{"case", bc.name},
            {"barycentric", bc.barycentric},
            {"base", stats_json(*bc.base_mesh)},
            {"solved", stats_json(*bc.mesh)},
            {"tags", bc.mesh->tags()}};
  const Discretization disc(bc.mesh);
  j["dofs"] = {{"velocity", disc.velocity_size()},
               {"temperature", disc.temperature_size()},
               {"pressure", disc.pressure_size()}};
  out << std::setw(2) << j << '\n';
  return kExitOk;
}

struct FlagSpec {
  const char* key;   // config key
  const char* flag;  // long flag
  enum Kind { number, integer, text, number_list, int_list, text_list } kind;
  const char* help;
};

const std::vector<FlagSpec>& flag_specs() {
  static const std::vector<FlagSpec> specs = {
      {"case", "--case", FlagSpec::text, "cavity | complex | mms | file:<path>"},
      {"method", "--method", FlagSpec::text_list, "picard | newton | picard-newton | aa-picard-newton (comma list for sweep)"},
      {"depth", "--depth", FlagSpec::int_list, "Anderson depth m (comma list for sweep)"},
      {"ra", "--ra", FlagSpec::number, "Rayleigh number"},
      {"ra_list", "--ra-list", FlagSpec::number_list, "comma-separated ascending Rayleigh numbers"},
      {"n", "--n", FlagSpec::integer, "mesh subdivisions per unit side"},
      {"tolerance", "--tolerance", FlagSpec::number, "B-norm stopping tolerance"},
      {"max_iters", "--max-iters", FlagSpec::integer, "iteration cap"},
      {"blowup", "--blowup", FlagSpec::number, "divergence threshold"},
      {"jobs", "--jobs", FlagSpec::integer, "parallel solves"},
      {"out", "--out", FlagSpec::text, "output directory"},
      {"levels", "--levels", FlagSpec::int_list, "mms mesh levels, ascending"},
      {"refine", "--refine", FlagSpec::number, "bisect the frontier to this Ra step (0 = off)"},
  };
  return specs;
}

json flag_to_json(const FlagSpec& spec, const std::string& text) {
  const std::string where = spec.flag;
  auto num = [&](const std::string& s) -> json {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw ConfigError(where, "not a number: '" + s + "'");
    return v;
  };
  auto integer = [&](const std::string& s) -> json {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw ConfigError(where, "not an integer: '" + s + "'");
    return v;
  };
  switch (spec.kind) {
    case FlagSpec::number: return num(text);
    case FlagSpec::integer: return integer(text);
    case FlagSpec::text: return text;
    case FlagSpec::text_list: return text;
    case FlagSpec::number_list:
    case FlagSpec::int_list: {
      json arr = json::array();
      for (const auto& item : split_commas(text))
        arr.push_back(spec.kind == FlagSpec::number_list ? num(item) : integer(item));
      return arr;
    }
  }
  return text;
}

// Flags accepted by each subcommand.
const std::map<std::string, std::vector<std::string>>& subcommand_flags() {
  static const std::map<std::string, std::vector<std::string>> m = {
      {"run", {"case", "method", "depth", "ra", "n", "tolerance", "max_iters", "blowup", "out"}},
      {"sweep", {"case", "method", "depth", "ra_list", "n", "tolerance", "max_iters", "blowup", "jobs", "out", "refine"}},
      {"mms", {"method", "depth", "ra", "levels", "tolerance", "max_iters", "blowup", "out"}},
      {"mesh-info", {"case", "n"}},
  };
  return m;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady Boussinesq solver: Picard, Newton, Picard-Newton and AA-Picard-Newton", "bouss"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  struct Bound {
    std::string config_path;
    bool no_barycentric = false;
    std::map<std::string, std::string> values;
  };
  std::map<std::string, Bound> bound;
  std::map<std::string, std::map<std::string, CLI::Option*>> opts;
  std::map<std::string, CLI::Option*> nobary;
  const std::map<std::string, std::string> descriptions = {
      {"run", "solve one problem"},
      {"sweep", "solve a grid of (method, Ra) combinations and report the max-Ra frontier"},
      {"mms", "manufactured-solution convergence study"},
      {"mesh-info", "print mesh and dof statistics"}};
  for (const auto& [name, keys] : subcommand_flags()) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    Bound& b = bound[name];
    for (const auto& spec : flag_specs()) {
      if (std::find(keys.begin(), keys.end(), spec.key) == keys.end()) continue;
      opts[name][spec.key] = sub->add_option(spec.flag, b.values[spec.key], spec.help);
    }
    nobary[name] = sub->add_flag("--no-barycentric", b.no_barycentric, "skip barycentric refinement");
    sub->add_option("--config", b.config_path, "JSON config file (flags override it)");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  Bound& b = bound[cmd];
  try {
    CliConfig cfg;
    if (!b.config_path.empty()) cfg = load_config(b.config_path);
    for (const auto& spec : flag_specs()) {
      auto it = opts[cmd].find(spec.key);
      if (it == opts[cmd].end() || it->second->count() == 0) continue;
      apply_config_value(cfg, spec.key, flag_to_json(spec, b.values[spec.key]), spec.flag);
    }
    if (nobary[cmd]->count() > 0) cfg.barycentric = false;

    if (cmd == "run") return cmd_run(cfg, out);
    if (cmd == "sweep") return cmd_sweep(cfg, out);
    if (cmd == "mms") return cmd_mms(cfg, out);
    return cmd_mesh_info(cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const CsvError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const MeshIoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const MeshError& e) {
    err << "error: mesh: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace bouss
