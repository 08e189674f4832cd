#include <array>
#include <cmath>

#include "alcs/errors.hpp"
#include "internal.hpp"

namespace alcs {

namespace {

constexpr std::array<double, 8> kY = {28, 8, -3, 7, -1, 1, 18, 12};
constexpr std::array<double, 8> kSigma = {15, 10, 16, 11, 9, 11, 10, 18};

class EightSchoolsBound : public BoundModelBase<EightSchoolsBound> {
 public:
  EightSchoolsBound(double mu, double tau)
      : BoundModelBase(LatentStructure::uniform_blocks(8, 1)), mu_(mu), tau_(tau) {}

  template <class T>
  T block_term(std::size_t j, std::span<const T> z) const {
    return ad::normal_logpdf(z[0], kY[j], kSigma[j]) + ad::normal_logpdf(z[0], mu_, tau_);
  }
  template <class T>
  T log_lik(std::span<const T> z) const {
    T acc(0.0);
    for (std::size_t j = 0; j < 8; ++j) acc += ad::normal_logpdf(z[j], kY[j], kSigma[j]);
    return acc;
  }
  template <class T>
  T log_prior(std::span<const T> z) const {
    T acc(0.0);
    for (std::size_t j = 0; j < 8; ++j) acc += ad::normal_logpdf(z[j], mu_, tau_);
    return acc;
  }

  ad::DiffFunction block_log_joint(std::size_t b) const override { return make_block(b); }

  StructuredMatrix prior_precision() const override {
    return StructuredMatrix::identity(structure_, 1.0 / (tau_ * tau_));
  }
  Vector prior_mean() const override { return Vector::Constant(8, mu_); }
  Vector latent_prior_transform(std::span<const double> u) const override {
    Vector z(8);
    for (int j = 0; j < 8; ++j) z[j] = mu_ + tau_ * normal_quantile(u[static_cast<std::size_t>(j)]);
    return z;
  }

 private:
  double mu_, tau_;
};

class EightSchools : public HierarchicalModel {
 public:
  std::string name() const override { return "eight_schools"; }
  std::size_t theta_dim() const override { return 2; }
  std::size_t latent_dim() const override { return 8; }
  std::vector<std::string> theta_names() const override { return {"mu", "log_tau"}; }
  LatentStructure structure() const override { return LatentStructure::uniform_blocks(8, 1); }

  Vector prior_transform(std::span<const double> u) const override {
    Vector t(2);
    t << -10.0 + 20.0 * u[0], -5.0 + 10.0 * u[1];
    return t;
  }
  std::shared_ptr<const BoundModel> bind(std::span<const double> theta) const override {
    const double tau = std::exp(theta[1]);
    detail::require_positive(tau, "tau");
    return std::make_shared<EightSchoolsBound>(theta[0], tau);
  }

  ExactKind exact_kind() const override { return ExactKind::Analytic; }
  double exact_marginal(std::span<const double> theta) const override {
    const double tau2 = std::exp(2.0 * theta[1]);
    double acc = 0.0;
    for (std::size_t j = 0; j < 8; ++j)
      acc += ad::normal_logpdf(kY[j], theta[0], std::sqrt(tau2 + kSigma[j] * kSigma[j]));
    return acc;
  }

  json params() const override { return json::object(); }
  SyntheticDataset dataset() const override {
    SyntheticDataset d;
    d.model = name();
    d.observations = {{"y", kY}, {"sigma", kSigma}};
    return d;
  }
};

}  // namespace

ModelPtr make_eight_schools() { return std::make_shared<EightSchools>(); }

}  // namespace alcs
