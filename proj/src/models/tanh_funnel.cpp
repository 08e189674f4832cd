#include <cmath>
#include <random>

#include "alcs/models/quadrature.hpp"
#include "internal.hpp"

namespace alcs {

namespace {

// z_j ~ N(0, e^theta), x_j ~ N(tanh z_j, 1) (or N(z_j, 1) in the linear variant).
class FunnelBound : public BoundModelBase<FunnelBound> {
 public:
  FunnelBound(std::shared_ptr<const std::vector<double>> x, double theta, bool linear)
      : BoundModelBase(LatentStructure::diagonal(x->size())),
        x_(std::move(x)),
        sd_(std::exp(0.5 * theta)),
        linear_(linear) {}

  bool separable() const override { return true; }
  ad::DiffFunction block_log_joint(std::size_t b) const override { return make_block(b); }

  template <class T>
  T obs(std::size_t j, const T& z) const {
    return linear_ ? ad::normal_logpdf(z, (*x_)[j], 1.0)
                   : ad::normal_logpdf(ad::tanh(z), (*x_)[j], 1.0);
  }
  template <class T>
  T block_term(std::size_t j, std::span<const T> z) const {
    return obs(j, z[0]) + ad::normal_logpdf(z[0], 0.0, sd_);
  }
  template <class T>
  T log_lik(std::span<const T> z) const {
    T acc(0.0);
    for (std::size_t j = 0; j < x_->size(); ++j) acc += obs(j, z[j]);
    return acc;
  }
  template <class T>
  T log_prior(std::span<const T> z) const {
    T acc(0.0);
    for (std::size_t j = 0; j < z.size(); ++j) acc += ad::normal_logpdf(z[j], 0.0, sd_);
    return acc;
  }

  StructuredMatrix prior_precision() const override {
    return StructuredMatrix::identity(structure_, 1.0 / (sd_ * sd_));
  }
  Vector prior_mean() const override { return Vector::Zero(static_cast<Eigen::Index>(x_->size())); }
  Vector latent_prior_transform(std::span<const double> u) const override {
    Vector z(static_cast<Eigen::Index>(x_->size()));
    for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = sd_ * normal_quantile(u[static_cast<std::size_t>(j)]);
    return z;
  }

  double log_marginal() const {
    double acc = 0.0;
    for (std::size_t j = 0; j < x_->size(); ++j) {
      if (linear_) {
        acc += ad::normal_logpdf((*x_)[j], 0.0, std::sqrt(1.0 + sd_ * sd_));
        continue;
      }
      auto f = [&](double z) { return obs(j, z) + ad::normal_logpdf(z, 0.0, sd_); };
      acc += log_quadrature(f, -12.0 * sd_, 12.0 * sd_).log_value;
    }
    return acc;
  }

 private:
  std::shared_ptr<const std::vector<double>> x_;
  double sd_;
  bool linear_;
};

class Funnel : public HierarchicalModel {
 public:
  Funnel(FunnelConfig cfg, std::shared_ptr<const std::vector<double>> x) : cfg_(cfg), x_(std::move(x)) {}

  std::string name() const override { return cfg_.linear ? "linear_funnel" : "tanh_funnel"; }
  std::size_t theta_dim() const override { return 1; }
  std::size_t latent_dim() const override { return x_->size(); }
  std::vector<std::string> theta_names() const override { return {"theta"}; }
  LatentStructure structure() const override { return LatentStructure::diagonal(x_->size()); }

  // theta ~ N(0, 9)
  Vector prior_transform(std::span<const double> u) const override {
    return Vector::Constant(1, 3.0 * normal_quantile(u[0]));
  }
  std::shared_ptr<const BoundModel> bind(std::span<const double> t) const override {
    detail::require_positive(std::exp(0.5 * t[0]), "prior scale");
    return std::make_shared<FunnelBound>(x_, t[0], cfg_.linear);
  }

  ExactKind exact_kind() const override {
    return cfg_.linear ? ExactKind::Analytic : ExactKind::Quadrature;
  }
  double exact_marginal(std::span<const double> t) const override {
    return std::static_pointer_cast<const FunnelBound>(bind(t))->log_marginal();
  }

  json params() const override {
    return {{"latents", cfg_.latents},
            {"theta_true", cfg_.theta_true},
            {"linear", cfg_.linear},
            {"seed", cfg_.seed}};
  }
  SyntheticDataset dataset() const override {
    SyntheticDataset s;
    s.model = name();
    s.seed = cfg_.seed;
    s.observations = {{"x", *x_}};
    s.truth = {{"theta", cfg_.theta_true}};
    return s;
  }

 private:
  FunnelConfig cfg_;
  std::shared_ptr<const std::vector<double>> x_;
};

}  // namespace

ModelPtr make_tanh_funnel(const FunnelConfig& cfg) {
  if (cfg.latents < 1) throw ConfigError("funnel needs J >= 1");
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto x = std::make_shared<std::vector<double>>();
  const double sd = std::exp(0.5 * cfg.theta_true);
  for (std::size_t j = 0; j < cfg.latents; ++j) {
    const double z = sd * normal(rng);
    x->push_back((cfg.linear ? z : std::tanh(z)) + normal(rng));
  }
  return std::make_shared<Funnel>(cfg, x);
}

double funnel_quadrature(const HierarchicalModel& funnel, double theta) {
  if (funnel.name() != "tanh_funnel" && funnel.name() != "linear_funnel")
    throw ModelError("funnel_quadrature needs the funnel model");
  const double t[1] = {theta};
  return funnel.exact_marginal(t);
}

namespace detail {
ModelPtr funnel_from(const FunnelConfig& cfg, const SyntheticDataset& s) {
  auto x = std::make_shared<std::vector<double>>(s.observations.at("x").get<std::vector<double>>());
  if (x->empty()) throw ConfigError("funnel dataset is empty");
  FunnelConfig c = cfg;
  c.latents = x->size();
  c.seed = s.seed;
  return std::make_shared<Funnel>(c, x);
}
}  // namespace detail

}  // namespace alcs
