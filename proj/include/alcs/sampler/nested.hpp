#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "alcs/sampler/slice.hpp"

namespace alcs {

// Prior-volume bookkeeping for the k deaths of one batch. OrderStatistics
// shrinks by 1/(m - j) for the j-th death (the expected log spacing of the
// j-th lowest of m uniforms); Sequential uses 1/m for every death.
enum class VolumeModel { OrderStatistics, Sequential };

VolumeModel parse_volume_model(const std::string& s);
std::string to_string(VolumeModel v);

struct NsSettings {
  std::size_t live = 500;
  std::size_t batch = 100;
  int slice_steps = 5;
  double termination = -3.0;  // stop when log(Z_live / Z) falls below this
  std::uint64_t seed = 42;
  int threads = 1;
  VolumeModel volume = VolumeModel::OrderStatistics;
  std::size_t bootstrap = 200;
  std::size_t max_iterations = 1000000;
  int slice_retries = 10;
  double slice_width = 2.0;

  void validate() const;
};

struct DeadPoint {
  Vector params;
  double logl = 0.0;
  double logx = 0.0;       // log prior volume after this death
  std::uint32_t flags = 0;
  std::size_t live = 0;    // live points present when it died
};

struct NsState {
  std::vector<LivePoint> live;  // sorted by (logL, tie)
  double logx = 0.0;
  double logz = -std::numeric_limits<double>::infinity();
  std::vector<DeadPoint> dead;
  std::size_t iteration = 0;
  std::size_t evaluations = 0;
};

struct PosteriorSample {
  Vector params;
  double logl = 0.0;
  double weight = 0.0;  // normalised
  std::uint32_t flags = 0;
  std::shared_ptr<const WarmStartCache> cache;
};

struct NsResult {
  double logz = 0.0;
  double sigma = 0.0;
  std::size_t n_dead = 0;
  double dkl = 0.0;
  double flagged_fraction = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  double final_logx = 0.0;
  std::vector<std::string> names;
  std::vector<DeadPoint> dead;
  std::vector<double> live_logl;
  std::vector<PosteriorSample> posterior;  // dead then final live points
};

NsState ns_init(const Likelihood& like, const NsSettings& s);
// Delete the batch, accumulate evidence, spawn replacements.
void ns_step(NsState& state, const Likelihood& like, const NsSettings& s);
bool terminate(const NsState& state, double threshold = -3.0);
NsResult ns_finish(const NsState& state, const NsSettings& s, const Likelihood& like);

// Optional progress hook, called after every step.
using NsProgress = std::function<void(const NsState&)>;
NsResult run(const Likelihood& like, const NsSettings& s, const NsProgress& progress = {});

// log Z from a trace: trapezoid segments with L_0 := L_1, plus the live
// remainder X_N * mean(L_live).
double log_evidence(const std::vector<DeadPoint>& dead, const std::vector<double>& live_logl);

// Std of log Z over n_boot redraws of the shrinkage factors t ~ Beta(n, 1).
double bootstrap_sigma(const std::vector<DeadPoint>& dead, const std::vector<double>& live_logl,
                       std::size_t n_boot = 200, std::uint64_t seed = 0);

double logsumexp(const std::vector<double>& v);

}  // namespace alcs
