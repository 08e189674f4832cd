#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alcs/cli/commands.hpp"

namespace {

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string output;
  int threads = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config, "JSON run configuration");
  sub->add_option("--set", c.sets, "override a config key, e.g. --set sampler.live=200")
      ->take_all();
  sub->add_option("-o,--output", c.output, "output directory (same as --set output=...)");
  sub->add_option("--threads", c.threads, "cap on concurrent replacement chains")
      ->check(CLI::PositiveNumber);
}

alcs::RunConfig resolve(const Common& c) {
  std::vector<std::string> sets = c.sets;
  if (!c.output.empty()) sets.push_back("output=\"" + c.output + "\"");
  if (c.threads > 0) sets.push_back("sampler.threads=" + std::to_string(c.threads));
  return alcs::load_config(c.config, sets);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alcs: collapsed-evidence nested sampling"};
  app.require_subcommand(1);

  Common run_c, diag_c, rec_c, bench_c, repro_c, data_c;
  bool fresh = false;
  std::string table;

  auto* run = app.add_subcommand("run", "nested sampling run: summary.json, deadpoints.jsonl, posterior.csv");
  add_common(run, run_c);
  auto* diag = app.add_subcommand("diagnose", "importance-sampling ESS profile: diagnostics.json, ess_profile.csv");
  add_common(diag, diag_c);
  diag->add_flag("--fresh", fresh, "run the sampler first instead of reading posterior.csv");
  auto* rec = app.add_subcommand("recover", "joint (theta, z) samples from a finished run: joint_samples.csv");
  add_common(rec, rec_c);
  auto* bench = app.add_subcommand("bench-hessian", "dense vs tridiagonal Hessian timing: bench.csv");
  add_common(bench, bench_c);
  auto* repro = app.add_subcommand("reproduce", "desk-scale reproduction report: report.json");
  add_common(repro, repro_c);
  repro->add_option("table", table, "t1, t3 or funnel")->required()->check(CLI::IsMember({"t1", "t3", "funnel"}));
  auto* data = app.add_subcommand("data", "export the synthetic dataset: dataset.json");
  add_common(data, data_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : alcs::kExitConfig;
  }

  return alcs::guarded(
      [&]() -> int {
        if (*run) return alcs::cmd_run(resolve(run_c), std::cerr);
        if (*diag) return alcs::cmd_diagnose(resolve(diag_c), fresh, std::cerr);
        if (*rec) return alcs::cmd_recover(resolve(rec_c), std::cerr);
        if (*bench) return alcs::cmd_bench_hessian(resolve(bench_c), std::cerr);
        if (*repro) return alcs::cmd_reproduce(resolve(repro_c), table, std::cerr);
        return alcs::cmd_data(resolve(data_c), std::cerr);
      },
      std::cerr);
}
