#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = symctl::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli_scratch" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kConfigs = std::string(SYMBIOTIC_SOURCE_DIR) + "/configs/";

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == symctl::kUsage);
  CHECK(run({"frobnicate"}).code == symctl::kUsage);
  CHECK(run({"run"}).code == symctl::kUsage);
  CHECK(run({"run", "x.json", "--threads", "0"}).code == symctl::kUsage);
  CHECK(run({"--help"}).code == symctl::kOk);
}

TEST_CASE("missing config file exits 2") {
  const Result r = run({"run", "/nonexistent/config.json"});
  CHECK(r.code == symctl::kConfigError);
  CHECK(r.err.find("cannot read config file") != std::string::npos);
}

TEST_CASE("invalid config exits 2") {
  const fs::path dir = scratch("invalid");
  CHECK(run({"run", write_config(dir, R"({"control": {"alpha": 0}})").string()}).code == symctl::kConfigError);
  CHECK(run({"run", write_config(dir, R"({"gains": {"K1": [[-0.16, 0.57]]}})").string()}).code ==
        symctl::kConfigError);
  CHECK(run({"run", write_config(dir, "not json").string()}).code == symctl::kConfigError);
}

TEST_CASE("validate reports the certificate regime") {
  const Result r = run({"run", kConfigs + "alpha_study.json", "--validate"});
  CHECK(r.code == symctl::kOk);
  CHECK(r.out.find("Theorem 1 constants infeasible; Theorem 2 regime active") != std::string::npos);

  const Result t1 = run({"run", kConfigs + "theorem1.json", "--validate"});
  CHECK(t1.code == symctl::kOk);
  CHECK(t1.out.find("Theorem 1 constants feasible") != std::string::npos);
}

TEST_CASE("alpha study writes its manifest and is byte-reproducible") {
  const fs::path dir = scratch("alpha");
  const fs::path cfg = write_config(dir, R"({
    "simulation": {"t_final": 2},
    "experiment": {"kind": "alpha_study", "alphas": [1, 10]}})");
  const Result a = run({"run", cfg.string(), "--out", (dir / "a").string()});
  REQUIRE(a.code == symctl::kOk);
  for (const char* f : {"alpha_study.csv", "resolved_config.json", "traj_alpha1_SFG.csv", "traj_alpha1_NFG.csv",
                        "traj_alpha10_SFG.csv", "traj_alpha10_NFG.csv"})
    CHECK(fs::exists(dir / "a" / f));
  const Result b = run({"run", cfg.string(), "--out", (dir / "b").string(), "--threads", "2"});
  REQUIRE(b.code == symctl::kOk);
  for (const char* f : {"alpha_study.csv", "traj_alpha10_NFG.csv"}) CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
}

TEST_CASE("single run outputs") {
  const fs::path dir = scratch("single");
  const fs::path cfg = write_config(dir, R"({"simulation": {"t_final": 3}, "experiment": {"kind": "single_run"}})");
  const Result r = run({"run", cfg.string(), "--out", dir.string()});
  REQUIRE(r.code == symctl::kOk);
  for (const char* f : {"single_run.csv", "traj_single.csv", "certificate_report.csv", "certificate_summary.txt",
                        "frequency_response.csv", "resolved_config.json"})
    CHECK(fs::exists(dir / f));
  CHECK(slurp(dir / "certificate_summary.txt").find("regime = theorem2") != std::string::npos);
}

TEST_CASE("iso-cost outputs and empty-band warning") {
  const fs::path dir = scratch("iso");
  const fs::path cfg = write_config(dir, R"({"simulation": {"t_final": 2},
    "experiment": {"kind": "iso_cost", "steps": 2, "target_cost": 0}})");
  const Result r = run({"run", cfg.string(), "--out", dir.string()});
  CHECK(r.code == symctl::kOk);
  CHECK(r.err.find("no grid point") != std::string::npos);
  CHECK(fs::exists(dir / "iso_cost.csv"));
  CHECK(fs::exists(dir / "eps_grid.csv"));
}

TEST_CASE("numerical failure exits 3 and still writes the table") {
  const fs::path dir = scratch("diverge");
  const fs::path cfg = write_config(dir, R"({"simulation": {"dt": 0.5, "t_final": 200},
    "experiment": {"kind": "eps_grid", "steps": 2}})");
  const Result r = run({"run", cfg.string(), "--out", dir.string()});
  CHECK(r.code == symctl::kNumericalError);
  CHECK(r.err.find("divergence") != std::string::npos);
  CHECK(fs::exists(dir / "eps_grid.csv"));
}
