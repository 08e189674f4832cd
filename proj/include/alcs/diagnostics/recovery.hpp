#pragma once

#include <cstdint>
#include <vector>

#include "alcs/collapse/collapse.hpp"
#include "alcs/models/model.hpp"
#include "alcs/sampler/nested.hpp"

namespace alcs {

struct JointSample {
  Vector theta;
  Vector z;
  std::uint32_t flags = 0;
  std::size_t source = 0;  // index into the run's posterior samples
};

// Resample theta from the run by weight, re-collapse at each draw and sample
// z ~ N(z_hat, H^{-1}) through the structured Cholesky factor.
std::vector<JointSample> recover_posterior(const NsResult& run, const HierarchicalModel& model,
                                           std::size_t s, std::uint64_t seed,
                                           const CollapseOptions& opt = {});

}  // namespace alcs
