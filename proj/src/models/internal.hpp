#pragma once

// Factories that take observations verbatim (dataset import).

#include <cmath>
#include <string>

#include "alcs/errors.hpp"
#include "alcs/models/zoo.hpp"

namespace alcs::detail {

ModelPtr radon_from(const RadonConfig& cfg, const SyntheticDataset& d);
ModelPtr brownian_from(const BrownianConfig& cfg, const SyntheticDataset& d);
ModelPtr lgcp_from(const LgcpConfig& cfg, const SyntheticDataset& d);
ModelPtr sv_from(const SvConfig& cfg, const SyntheticDataset& d);
ModelPtr irt_from(const IrtConfig& cfg, const SyntheticDataset& d);
ModelPtr sne_from(const SneConfig& cfg, const SyntheticDataset& d);
ModelPtr student_hier_from(const StudentHierConfig& cfg, const SyntheticDataset& d);
ModelPtr funnel_from(const FunnelConfig& cfg, const SyntheticDataset& d);

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DegeneratePrior(std::string(what) + " must be positive and finite");
}

}  // namespace alcs::detail
