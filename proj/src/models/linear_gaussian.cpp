#include <cmath>

#include "internal.hpp"

namespace alcs {

namespace {

class LinearBound : public BoundModelBase<LinearBound> {
 public:
  LinearBound(double y, double m) : BoundModelBase(LatentStructure::uniform_blocks(1, 1)), y_(y), m_(m) {}

  ad::DiffFunction block_log_joint(std::size_t b) const override { return make_block(b); }

  template <class T>
  T block_term(std::size_t, std::span<const T> z) const {
    return log_lik(z) + log_prior(z);
  }
  template <class T>
  T log_lik(std::span<const T> z) const {
    return ad::normal_logpdf(z[0], y_, 1.0);
  }
  template <class T>
  T log_prior(std::span<const T> z) const {
    return ad::normal_logpdf(z[0], m_, 1.0);
  }

  StructuredMatrix prior_precision() const override { return StructuredMatrix::identity(structure_); }
  Vector prior_mean() const override { return Vector::Constant(1, m_); }
  Vector latent_prior_transform(std::span<const double> u) const override {
    return Vector::Constant(1, m_ + normal_quantile(u[0]));
  }

 private:
  double y_, m_;
};

class LinearGaussian : public HierarchicalModel {
 public:
  explicit LinearGaussian(double y) : y_(y) {}

  std::string name() const override { return "linear_gaussian"; }
  std::size_t theta_dim() const override { return 1; }
  std::size_t latent_dim() const override { return 1; }
  std::vector<std::string> theta_names() const override { return {"m"}; }
  LatentStructure structure() const override { return LatentStructure::uniform_blocks(1, 1); }

  Vector prior_transform(std::span<const double> u) const override {
    return Vector::Constant(1, -5.0 + 10.0 * u[0]);
  }
  std::shared_ptr<const BoundModel> bind(std::span<const double> t) const override {
    return std::make_shared<LinearBound>(y_, t[0]);
  }
  ExactKind exact_kind() const override { return ExactKind::Analytic; }
  double exact_marginal(std::span<const double> t) const override {
    return ad::normal_logpdf(y_, t[0], std::sqrt(2.0));
  }

  json params() const override { return {{"y", y_}}; }
  SyntheticDataset dataset() const override {
    SyntheticDataset s;
    s.model = name();
    s.observations = {{"y", y_}};
    return s;
  }

 private:
  double y_;
};

}  // namespace

ModelPtr make_linear_gaussian(double y) { return std::make_shared<LinearGaussian>(y); }

}  // namespace alcs
