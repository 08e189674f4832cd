#pragma once

// Desk-scale reproduction recipes shared by `alcs reproduce` and the
// acceptance binary.

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "alcs/diagnostics/importance.hpp"
#include "alcs/models/model.hpp"
#include "alcs/sampler/likelihood.hpp"
#include "alcs/sampler/nested.hpp"

namespace alcs {

struct ReportRow {
  std::string name;
  double observed = 0.0;
  double paper = std::numeric_limits<double>::quiet_NaN();  // NaN: no paper value
  double lo = -std::numeric_limits<double>::infinity();     // accepted interval
  double hi = std::numeric_limits<double>::infinity();
  bool pass = false;
  std::string note;
};

struct Report {
  std::string artefact;
  json settings = json::object();
  std::vector<ReportRow> rows;
  json data = json::object();  // plot-ready series

  bool pass() const;
  ReportRow& add(std::string name, double observed, double paper, double lo, double hi,
                 std::string note = {});
  json to_json() const;
  std::string to_text() const;
};

struct RecipeOptions {
  std::size_t live = 500;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int threads = 1;
  std::size_t is_k = 5000;
  std::size_t is_m = 200;
  std::uint64_t is_seed = 7;
  std::function<void(const std::string&)> log;
};

NsSettings recipe_ns(std::size_t live, std::uint64_t seed, int threads);

struct GapStats {
  std::vector<double> logz_a, logz_b, sigma_a, sigma_b;
  double mean_gap = 0.0;    // mean over seeds of logZ_a - logZ_b
  double sd_gap = 0.0;      // cross-seed std of the gap
  double sigma_comb = 0.0;  // sqrt(mean sigma_a^2 + mean sigma_b^2)
};

// One NS run per seed.
std::vector<NsResult> seeded_runs(ModelPtr model, const LikelihoodSettings& ls, std::size_t live,
                                  const std::vector<std::uint64_t>& seeds, int threads,
                                  const std::function<void(const std::string&)>& log = {});
// Gap statistics of paired runs (same seeds, same order).
GapStats gap_stats(const std::vector<NsResult>& a, const std::vector<NsResult>& b);

// Paired runs: the same NS seed for both likelihood settings.
GapStats evidence_gap(ModelPtr model, const LikelihoodSettings& a, const LikelihoodSettings& b,
                      std::size_t live, const std::vector<std::uint64_t>& seeds, int threads,
                      std::vector<NsResult>* runs_a = nullptr,
                      const std::function<void(const std::string&)>& log = {});

// M theta draws from a run by systematic resampling.
std::vector<Vector> posterior_thetas(const NsResult& run, std::size_t m, std::uint64_t seed);

DiagnosticReport posterior_ess(const HierarchicalModel& model, const NsResult& run, std::size_t m,
                               std::size_t k, Proposal proposal, std::uint64_t seed);

// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Table 1: conjugate evidence gaps and ESS, LGCP ESS.
Report reproduce_t1(const RecipeOptions& opt);
// Table 3, N = 50 row: Gaussian and Student-t gaps vs the quadrature reference.
Report reproduce_t3(const RecipeOptions& opt);
// Tanh funnel: evidence gap, pointwise errors and the ESS profile.
Report reproduce_funnel(const RecipeOptions& opt);

Report reproduce(const std::string& table, const RecipeOptions& opt);

}  // namespace alcs
