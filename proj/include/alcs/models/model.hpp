#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "alcs/autodiff/diff_function.hpp"
#include "alcs/autodiff/ops.hpp"
#include "alcs/linalg/structured.hpp"

namespace alcs {

using json = nlohmann::json;

// Observations plus the generating parameters, exportable as JSON.
struct SyntheticDataset {
  std::string model;
  std::uint64_t seed = 0;
  json observations;
  json truth;

  json to_json() const;
  static SyntheticDataset from_json(const json& j);
};

// A model with hyperparameters fixed: the latent log joint and its pieces.
class BoundModel {
 public:
  virtual ~BoundModel() = default;

  virtual const LatentStructure& structure() const = 0;
  // log L(D | theta, z) + log pi(z | theta)
  virtual ad::DiffFunction log_joint() const = 0;
  // Block-diagonal models: the b-th term of the log joint as a function of that
  // block's latents. The terms sum to log_joint.
  virtual ad::DiffFunction block_log_joint(std::size_t b) const;
  // True when block_log_joint is available. Diagonal models that provide it
  // are collapsed coordinate by coordinate.
  virtual bool separable() const { return structure().kind == StructureKind::BlockDiagonal; }

  virtual double log_likelihood(std::span<const double> z) const = 0;
  virtual double log_latent_prior(std::span<const double> z) const = 0;

  // Precision and mean of pi(z | theta), used for whitening and the cold start.
  virtual StructuredMatrix prior_precision() const = 0;
  virtual Vector prior_mean() const = 0;
  // Map u in (0,1)^{d_z} to a draw from pi(z | theta).
  virtual Vector latent_prior_transform(std::span<const double> u) const = 0;

  virtual std::uint32_t flags() const { return 0; }
};

enum class ExactKind { None, Analytic, Kalman, Quadrature };

class HierarchicalModel {
 public:
  virtual ~HierarchicalModel() = default;

  virtual std::string name() const = 0;
  virtual std::size_t theta_dim() const = 0;
  virtual std::size_t latent_dim() const = 0;
  virtual std::vector<std::string> theta_names() const = 0;
  virtual LatentStructure structure() const = 0;

  // Unit hypercube to hyperparameters.
  virtual Vector prior_transform(std::span<const double> u) const = 0;
  // Throws DegeneratePrior when theta makes pi(z | theta) improper.
  virtual std::shared_ptr<const BoundModel> bind(std::span<const double> theta) const = 0;

  virtual ExactKind exact_kind() const { return ExactKind::None; }
  // log p(D | theta) by analytic marginalisation, Kalman filtering or quadrature.
  virtual double exact_marginal(std::span<const double> theta) const;

  virtual json params() const = 0;
  virtual SyntheticDataset dataset() const = 0;
};

using ModelPtr = std::shared_ptr<const HierarchicalModel>;

// Shared glue: Derived supplies templated log_lik / log_prior (and
// block_term for block-diagonal models); this wraps them as DiffFunctions.
template <class Derived>
class BoundModelBase : public BoundModel,
                       public std::enable_shared_from_this<BoundModelBase<Derived>> {
 public:
  explicit BoundModelBase(LatentStructure s) : structure_(std::move(s)) {}

  const LatentStructure& structure() const override { return structure_; }

  ad::DiffFunction log_joint() const override {
    auto self = std::static_pointer_cast<const Derived>(this->shared_from_this());
    return ad::DiffFunction(structure_.dim, [self](auto z) {
      return self->log_lik(z) + self->log_prior(z);
    });
  }

  double log_likelihood(std::span<const double> z) const override {
    return derived().log_lik(z);
  }
  double log_latent_prior(std::span<const double> z) const override {
    return derived().log_prior(z);
  }

 protected:
  const Derived& derived() const { return static_cast<const Derived&>(*this); }

  template <class D = Derived>
  ad::DiffFunction make_block(std::size_t b) const {
    auto self = std::static_pointer_cast<const D>(this->shared_from_this());
    const std::size_t size =
        structure_.kind == StructureKind::BlockDiagonal ? structure_.block_sizes.at(b) : 1;
    return ad::DiffFunction(size, [self, b](auto z) { return self->block_term(b, z); });
  }

  LatentStructure structure_;
};

constexpr double kLog2Pi = 1.83787706640934548356;

// Standard normal quantile.
double normal_quantile(double u);

}  // namespace alcs
