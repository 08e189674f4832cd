#include "alcs/models/model.hpp"

#include <boost/math/distributions/normal.hpp>

#include "alcs/errors.hpp"

namespace alcs {

json SyntheticDataset::to_json() const {
  return json{{"schema_version", 1},
              {"model", model},
              {"seed", seed},
              {"observations", observations},
              {"truth", truth}};
}

SyntheticDataset SyntheticDataset::from_json(const json& j) {
  if (!j.is_object() || !j.contains("observations") || !j.contains("model"))
    throw ConfigError("dataset JSON needs 'model' and 'observations'");
  SyntheticDataset d;
  d.model = j.at("model").get<std::string>();
  d.seed = j.value("seed", std::uint64_t{0});
  d.observations = j.at("observations");
  d.truth = j.value("truth", json::object());
  return d;
}

ad::DiffFunction BoundModel::block_log_joint(std::size_t) const {
  throw ModelError("model does not factorise into latent blocks");
}

double HierarchicalModel::exact_marginal(std::span<const double>) const {
  throw ModelError("model '" + name() + "' has no exact marginal likelihood");
}

double normal_quantile(double u) {
  static const boost::math::normal_distribution<double> kStd(0.0, 1.0);
  return boost::math::quantile(kStd, u);
}

}  // namespace alcs
