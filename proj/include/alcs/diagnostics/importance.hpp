#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "alcs/collapse/collapse.hpp"
#include "alcs/models/model.hpp"

namespace alcs {

enum class Proposal { Gaussian, Student };

Proposal parse_proposal(const std::string& s);
std::string to_string(Proposal p);

struct IsOptions {
  CollapseOptions collapse;
  StudentOptions student;
};

struct IsRecord {
  Vector theta;
  std::size_t k = 0;
  double ess = 0.0;
  double ess_frac = 0.0;
  double log_mean_weight = 0.0;  // log (1/K) sum w, weights relative to the ALCS value
  double log_mean_weight_sd = 0.0;  // delta-method Monte Carlo error of the above
  double loglik_alcs = 0.0;
  std::uint32_t flags = 0;
};

// Draw K latents from the local approximation at theta and weight them
// against the exact unnormalised conditional.
IsRecord is_ess(const HierarchicalModel& model, const Vector& theta, std::size_t k,
                Proposal proposal, std::uint64_t seed, const IsOptions& opt = {});

// logL_ALCS + log mean weight.
double is_corrected_loglik(const HierarchicalModel& model, const Vector& theta, std::size_t k,
                           std::uint64_t seed, Proposal proposal = Proposal::Gaussian,
                           const IsOptions& opt = {});

struct DiagnosticReport {
  std::vector<IsRecord> records;
  double p10 = 0.0, p50 = 0.0, p90 = 0.0;  // of ESS/K

  json to_json(const std::vector<std::string>& theta_names) const;
  std::string to_csv(const std::vector<std::string>& theta_names) const;
};

DiagnosticReport ess_profile(const HierarchicalModel& model, const std::vector<Vector>& thetas,
                             std::size_t k, Proposal proposal, std::uint64_t seed,
                             const IsOptions& opt = {});

// n indices drawn by systematic resampling of the (normalised) weights.
std::vector<std::size_t> systematic_resample(const std::vector<double>& weights, std::size_t n,
                                             std::mt19937_64& rng);

// Linear-interpolated percentile, q in [0, 1].
double percentile(std::vector<double> v, double q);

}  // namespace alcs
