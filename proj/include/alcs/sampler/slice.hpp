#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "alcs/sampler/likelihood.hpp"

namespace alcs {

// One member of the live set. The last unit-cube coordinate is an auxiliary
// uniform used only to break likelihood ties.
struct LivePoint {
  std::vector<double> u;
  Vector params;
  double logl = -std::numeric_limits<double>::infinity();
  std::uint32_t flags = 0;
  std::shared_ptr<const WarmStartCache> cache;

  double tie() const { return u.back(); }
};

// Strict order on (logL, tie).
inline bool above(double logl, double tie, double thr_logl, double thr_tie) {
  return logl > thr_logl || (logl == thr_logl && tie > thr_tie);
}

struct SliceSettings {
  int steps = 5;
  int retries = 10;     // fresh directions after a collapsed bracket
  double width = 2.0;   // initial bracket, in units of the live spread
  int max_step_out = 100;
};

// Lower Cholesky factor of the live-set covariance in u-space (jittered).
Matrix live_covariance_factor(const std::vector<LivePoint>& live);

// s univariate slice updates from `start` restricted to (logL, tie) above the
// threshold. Directions are L n with n uniform on the sphere; points outside
// the unit cube lie outside the slice. Throws StuckSampler when a step keeps
// collapsing.
LivePoint slice_sample_constrained(const Likelihood& like, const LivePoint& start,
                                   double thr_logl, double thr_tie, const Matrix& cov_factor,
                                   const SliceSettings& s, std::mt19937_64& rng,
                                   std::size_t& evaluations);

}  // namespace alcs
