#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "alcs/cli/config.hpp"

namespace alcs {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitModel = 3,
  kExitNumerical = 4,
  kExitReproductionFail = 5,
};

// Each command writes its artefacts under cfg.output and progress to `log`.
int cmd_run(const RunConfig& cfg, std::ostream& log);
// fresh = run the sampler first instead of reading posterior.csv.
int cmd_diagnose(const RunConfig& cfg, bool fresh, std::ostream& log);
int cmd_recover(const RunConfig& cfg, std::ostream& log);
int cmd_bench_hessian(const RunConfig& cfg, std::ostream& log);
int cmd_reproduce(const RunConfig& cfg, const std::string& table, std::ostream& log);
// Export the model's synthetic dataset to dataset.json.
int cmd_data(const RunConfig& cfg, std::ostream& log);

// Runs `body`, mapping exceptions to exit codes and a one-line JSON error
// object on `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace alcs
