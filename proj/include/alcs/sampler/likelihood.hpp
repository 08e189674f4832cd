#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "alcs/collapse/collapse.hpp"
#include "alcs/models/model.hpp"

namespace alcs {

struct Evaluation {
  double logl = -std::numeric_limits<double>::infinity();
  std::uint32_t flags = 0;
  std::shared_ptr<const WarmStartCache> cache;
};

// A log-likelihood on the unit hypercube, as seen by the nested sampler.
class Likelihood {
 public:
  virtual ~Likelihood() = default;
  virtual std::size_t dim() const = 0;
  // Names of the reported parameter columns.
  virtual std::vector<std::string> names() const = 0;
  virtual Vector params(std::span<const double> u) const = 0;
  // `parent` is the cache of the point the proposal descends from (may be null).
  virtual Evaluation evaluate(std::span<const double> u, const WarmStartCache* parent) const = 0;
};

using LikelihoodPtr = std::shared_ptr<const Likelihood>;

enum class LikelihoodMode { Gaussian, Student, ExactReference, JointFullNs };
// Which cache seeds each collapse: the parent live point's, the first
// evaluation's (fiducial), or none (cold start every time).
enum class WarmPolicy { PerPoint, Fiducial, None };

LikelihoodMode parse_mode(const std::string& s);
std::string to_string(LikelihoodMode m);
WarmPolicy parse_warm_policy(const std::string& s);
std::string to_string(WarmPolicy w);

struct LikelihoodSettings {
  LikelihoodMode mode = LikelihoodMode::Gaussian;
  WarmPolicy warm = WarmPolicy::PerPoint;
  StudentOptions student;
  CollapseOptions collapse;
};

LikelihoodPtr make_likelihood(ModelPtr model, const LikelihoodSettings& s = {});

// Plain likelihood over theta = transform(u).
LikelihoodPtr make_function_likelihood(
    std::size_t dim, std::vector<std::string> names,
    std::function<Vector(std::span<const double>)> transform,
    std::function<double(const Vector&)> logl);

}  // namespace alcs
