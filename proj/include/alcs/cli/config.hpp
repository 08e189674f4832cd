#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alcs/diagnostics/importance.hpp"
#include "alcs/models/model.hpp"
#include "alcs/sampler/likelihood.hpp"
#include "alcs/sampler/nested.hpp"

namespace alcs {

inline constexpr int kSchemaVersion = 1;

struct ThetaGrid {
  double lo = -3.0;
  double hi = 4.0;
  std::size_t n = 60;
};

struct RunConfig {
  std::string model = "eight_schools";
  json model_params = json::object();
  std::string data;  // optional dataset JSON; empty = generate from params

  LikelihoodSettings likelihood;
  NsSettings sampler;
  std::uint64_t seed = 42;
  std::string output = "alcs_out";

  std::size_t is_k = 5000;
  std::size_t is_m = 200;
  Proposal proposal = Proposal::Gaussian;
  std::optional<ThetaGrid> grid;

  std::size_t recover_samples = 2000;

  std::vector<std::size_t> bench_sizes = {16, 64, 256, 512};
  int bench_repeats = 3;

  std::size_t reproduce_live = 500;
  std::vector<std::uint64_t> reproduce_seeds = {1, 2, 3, 4, 5};

  json to_json() const;
  // Strict: unknown keys and ill-typed values raise ConfigError.
  static RunConfig from_json(const json& j);
};

// Set a dotted path ("sampler.live") in a raw config object. The value is
// parsed as JSON when possible, otherwise taken as a string.
void apply_override(json& raw, const std::string& assignment);

// File (may be empty) + ALCS_SEED + overrides, validated.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace alcs
