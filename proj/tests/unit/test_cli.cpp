#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "boussinesq/cli.hpp"

using namespace bouss;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bouss");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("bouss_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string config_error_where(const json& j) {
  CliConfig cfg;
  try {
    apply_config_json(cfg, j);
  } catch (const ConfigError& e) {
    return e.where();
  }
  return "<none>";
}

}  // namespace

TEST(Config, EmptyObjectGivesDefaults) {
  CliConfig cfg;
  apply_config_json(cfg, json::object());
  EXPECT_EQ(to_json(cfg), to_json(CliConfig{}));
  EXPECT_EQ(cfg.methods, std::vector<std::string>{"picard-newton"});
  EXPECT_EQ(cfg.n, 16);
}

TEST(Config, JsonRoundTrip) {
  CliConfig cfg;
  apply_config_json(cfg, {{"method", {"newton", "picard"}}, {"ra_list", {1e3, 2e3}}, {"n", 8}, {"barycentric", false}});
  CliConfig back;
  apply_config_json(back, to_json(cfg));
  EXPECT_EQ(to_json(back), to_json(cfg));
  EXPECT_EQ(back.methods.size(), 2u);
  EXPECT_FALSE(back.barycentric);
  for (const auto& key : config_keys()) EXPECT_TRUE(to_json(cfg).contains(key)) << key;
}

TEST(Config, ErrorsCiteJsonPointer) {
  EXPECT_EQ(config_error_where({{"ra", -5}}), "/ra");
  EXPECT_EQ(config_error_where({{"n", 1.5}}), "/n");
  EXPECT_EQ(config_error_where({{"tolerance", "small"}}), "/tolerance");
  EXPECT_EQ(config_error_where({{"ra_list", {1e3, 1e2}}}), "/ra_list/1");
  EXPECT_EQ(config_error_where({{"method", json::array()}}), "/method");
  EXPECT_EQ(config_error_where({{"bogus", 1}}), "/bogus");
  EXPECT_EQ(config_error_where({{"a/b", 1}}), "/a~1b");
}

TEST(Config, UnknownMethodListsValidNames) {
  CliConfig cfg;
  try {
    apply_config_json(cfg, {{"method", "nwton"}});
    FAIL() << "accepted a misspelled method";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.where().rfind("/method", 0), 0u) << e.where();
    const std::string msg = e.what();
    for (const auto& name : {"picard", "newton", "picard-newton", "aa-picard-newton"})
      EXPECT_NE(msg.find(name), std::string::npos) << msg;
  }
}

TEST(Config, FileThenFlagPrecedence) {
  const auto dir = scratch_dir("precedence");
  write_file(dir / "cfg.json", R"({"n": 2, "ra": 100, "case": "cavity", "max_iters": 3})");
  const auto r = cli({"run", "--config", (dir / "cfg.json").string(), "--ra", "200", "--out", (dir / "o").string()});
  ASSERT_NE(r.code, kExitUsage) << r.err;
  std::ifstream in(dir / "o" / "manifest.json");
  const json m = json::parse(in);
  EXPECT_EQ(m["config"]["ra"], 200.0);     // flag beats file
  EXPECT_EQ(m["config"]["n"], 2);          // file beats default
  EXPECT_EQ(m["config"]["tolerance"], 1e-8);  // default
}

TEST(Config, ManifestIsAcceptedAsConfig) {
  const auto dir = scratch_dir("manifest_in");
  CliConfig cfg;
  cfg.n = 3;
  cfg.ra = 50;
  write_file(dir / "manifest.json", make_manifest("run", cfg, heated_cavity_case(3)).dump());
  const CliConfig back = load_config(dir / "manifest.json");
  EXPECT_EQ(back.n, 3);
  EXPECT_EQ(back.ra, 50.0);
}

TEST(Config, UnreadableFile) {
  EXPECT_THROW(load_config("/nonexistent/cfg.json"), IoError);
  const auto dir = scratch_dir("bad_json");
  write_file(dir / "cfg.json", "{ not json");
  EXPECT_THROW(load_config(dir / "cfg.json"), ConfigError);
}

TEST(Cli, NegativeRaIsUsageErrorNamingFlag) {
  const auto r = cli({"run", "--ra", "-5", "--n", "2", "--out", scratch_dir("neg").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--ra"), std::string::npos) << r.err;
}

TEST(Cli, UnknownFlagIsUsageError) {
  const auto r = cli({"run", "--frobnicate"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, MissingSubcommandIsUsageError) { EXPECT_EQ(cli({}).code, kExitUsage); }

TEST(Cli, MisspelledMethodFlag) {
  const auto r = cli({"run", "--method", "nwton", "--n", "2"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("aa-picard-newton"), std::string::npos) << r.err;
}

TEST(Cli, UnwritableOutputIsIoError) {
  const auto dir = scratch_dir("blocked");
  write_file(dir / "file", "x");
  const auto r = cli({"run", "--n", "2", "--ra", "10", "--out", (dir / "file" / "sub").string()});
  EXPECT_EQ(r.code, kExitIo) << r.err;
}

TEST(Cli, MissingMeshFileIsIoError) {
  const auto r = cli({"mesh-info", "--case", "file:/nonexistent/mesh.msh"});
  EXPECT_EQ(r.code, kExitIo) << r.err;
}

TEST(Cli, RunWritesCsvAndManifest) {
  const auto dir = scratch_dir("run");
  const auto r = cli({"run", "--n", "2", "--ra", "100", "--method", "aa-picard-newton", "--depth", "2", "--out",
                      dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto runs = read_runs_csv(dir / "runs.csv");
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].variant, (MethodVariant{Method::aa_picard_newton, 2}));
  EXPECT_EQ(runs[0].history.status, Status::converged);
  std::ifstream in(dir / "manifest.json");
  const json m = json::parse(in);
  EXPECT_EQ(m["tool"], "bouss");
  EXPECT_EQ(m["command"], "run");
  EXPECT_EQ(m["result"]["status"], "converged");
  EXPECT_TRUE(m.contains("version"));
  EXPECT_TRUE(m.contains("timestamp"));
  EXPECT_EQ(m["mesh"]["solved"]["triangles"], 24);
}

TEST(Cli, DivergedRunExitsOne) {
  const auto dir = scratch_dir("diverged");
  const auto r = cli({"run", "--method", "newton", "--ra", "1e12", "--n", "8", "--out", dir.string()});
  EXPECT_EQ(r.code, kExitNotConverged) << r.err;
  const auto runs = read_runs_csv(dir / "runs.csv");
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].history.status, Status::diverged);
}

TEST(Cli, SweepWritesFrontier) {
  const auto dir = scratch_dir("sweep");
  const auto r = cli({"sweep", "--n", "2", "--method", "picard,newton", "--ra-list", "10,100", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(read_runs_csv(dir / "runs.csv").size(), 4u);
  const auto f = read_frontier_csv(dir / "frontier.csv");
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].max_ra, 100.0);
}

TEST(Cli, MeshInfoPrintsJson) {
  const auto r = cli({"mesh-info", "--case", "complex", "--n", "14"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["base"]["triangles"], 2 * 14 * 2);
  EXPECT_EQ(j["solved"]["triangles"], 3 * 2 * 14 * 2);
}

TEST(Cli, HelpAndVersion) {
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
  const auto v = cli({"--version"});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_NE(v.out.find(tool_version()), std::string::npos);
}
