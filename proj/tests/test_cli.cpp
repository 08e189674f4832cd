#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "alcs/cli/commands.hpp"
#include "alcs/cli/config.hpp"
#include "alcs/errors.hpp"
#include "doctest.h"

using namespace alcs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("alcs_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t data_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++n;
  return n - 1;  // header
}

RunConfig quick(const fs::path& out) {
  return load_config("", {"model=\"eight_schools\"", "sampler.live=60", "sampler.batch=12",
                          "output=\"" + out.string() + "\""});
}

}  // namespace

TEST_CASE("config round trips through JSON") {
  RunConfig c;
  c.model = "brownian";
  c.model_params = {{"steps", 20}};
  c.sampler.live = 123;
  c.sampler.batch = 7;
  c.likelihood.mode = LikelihoodMode::Student;
  c.grid = ThetaGrid{-1, 2, 5};
  const auto d = RunConfig::from_json(c.to_json());
  CHECK(d.to_json() == c.to_json());
  CHECK(d.sampler.live == 123);
  CHECK(d.grid->n == 5);
}

TEST_CASE("unknown and ill-typed keys are rejected") {
  CHECK_THROWS_AS(RunConfig::from_json({{"samplr", json::object()}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"sampler", {{"lives", 10}}}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"sampler", {{"live", "many"}}}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"mode", "laplace"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"sampler", {{"live", 10}, {"batch", 6}}}}), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json", {}), ConfigError);
}

TEST_CASE("precedence: file, then ALCS_SEED, then overrides") {
  const auto dir = scratch("precedence");
  fs::create_directories(dir);
  const auto file = dir / "cfg.json";
  std::ofstream(file) << R"({"seed": 3, "sampler": {"live": 80, "batch": 10}, "model": "brownian"})";
  ::unsetenv("ALCS_SEED");
  auto c = load_config(file.string(), {});
  CHECK(c.seed == 3);
  CHECK(c.model == "brownian");
  ::setenv("ALCS_SEED", "17", 1);
  CHECK(load_config(file.string(), {}).seed == 17);
  c = load_config(file.string(), {"seed=99", "sampler.live=40", "model.params.steps=12"});
  CHECK(c.seed == 99);
  CHECK(c.sampler.live == 40);
  CHECK(c.model_params.at("steps") == 12);
  ::setenv("ALCS_SEED", "x1", 1);
  CHECK_THROWS_AS(load_config(file.string(), {}), ConfigError);
  ::unsetenv("ALCS_SEED");
  CHECK_THROWS_AS(load_config("", {"noequals"}), ConfigError);
}

TEST_CASE("run writes its artefacts and is deterministic") {
  std::ostringstream log;
  const auto a = scratch("run_a"), b = scratch("run_b");
  REQUIRE(cmd_run(quick(a), log) == kExitOk);
  REQUIRE(cmd_run(quick(b), log) == kExitOk);
  for (const char* f : {"summary.json", "config.json", "deadpoints.jsonl", "posterior.csv"})
    CHECK(fs::exists(a / f));
  const auto sa = json::parse(slurp(a / "summary.json"));
  const auto sb = json::parse(slurp(b / "summary.json"));
  CHECK(sa.at("logZ") == sb.at("logZ"));
  CHECK(sa.at("schema_version") == kSchemaVersion);
  CHECK(data_rows(a / "posterior.csv") == sa.at("N_dead").get<std::size_t>() + 60);
  // every line of the dead-point trace is JSON
  std::ifstream in(a / "deadpoints.jsonl");
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    CHECK(json::accept(line));
    ++n;
  }
  CHECK(n == sa.at("N_dead").get<std::size_t>() + 1);
}

TEST_CASE("diagnose on a grid, recover from a run") {
  std::ostringstream log;
  const auto dir = scratch("diag");
  auto c = load_config("", {"model=\"linear_funnel\"", "model.params.latents=3", "diagnostics.K=50",
                            "output=\"" + dir.string() + "\"", "diagnostics.grid={\"lo\":-3,\"hi\":4,\"n\":60}"});
  REQUIRE(cmd_diagnose(c, false, log) == kExitOk);
  CHECK(data_rows(dir / "ess_profile.csv") == 60);

  const auto rd = scratch("recover");
  auto r = quick(rd);
  r.recover_samples = 100;
  REQUIRE(cmd_run(r, log) == kExitOk);
  REQUIRE(cmd_recover(r, log) == kExitOk);
  CHECK(data_rows(rd / "joint_samples.csv") == 100);
}

TEST_CASE("bench-hessian agrees between dense and tridiagonal") {
  std::ostringstream log;
  const auto dir = scratch("bench");
  auto c = load_config("", {"bench.sizes=[8,32]", "bench.repeats=1", "output=\"" + dir.string() + "\""});
  REQUIRE(cmd_bench_hessian(c, log) == kExitOk);
  std::ifstream in(dir / "bench.csv");
  std::string header, line;
  std::getline(in, header);
  while (header.rfind('#', 0) == 0) std::getline(in, header);
  CHECK(header.find("max_deviation") != std::string::npos);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("guarded maps failures to exit codes and a JSON error line") {
  std::ostringstream err;
  CHECK(guarded([]() -> int { throw ConfigError("bad"); }, err) == kExitConfig);
  const auto j = json::parse(err.str());
  CHECK(j.at("error") == "config");
  CHECK(j.at("exit_code") == kExitConfig);
  std::ostringstream e2;
  CHECK(guarded([]() -> int { throw DegeneratePrior("tau"); }, e2) == kExitModel);
  std::ostringstream e3;
  CHECK(guarded([]() -> int { throw IndefiniteHessian(-1.0, 2); }, e3) == kExitNumerical);
  std::ostringstream e4;
  const auto missing = scratch("missing");
  CHECK(guarded([&] { return cmd_recover(quick(missing), e4); }, e4) == kExitConfig);
}
