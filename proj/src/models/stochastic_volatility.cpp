#include <cmath>
#include <random>

#include <boost/math/special_functions/beta.hpp>

#include "internal.hpp"

namespace alcs {

namespace {

// x_0 ~ N(mu, s^2 / (1 - b^2)), x_t ~ N(mu + b (x_{t-1} - mu), s^2), y_t ~ N(0, e^{x_t}).
class SvBound : public BoundModelBase<SvBound> {
 public:
  SvBound(std::shared_ptr<const std::vector<double>> y, double beta, double mu, double sigma)
      : BoundModelBase(LatentStructure::tridiagonal(y->size())),
        y_(std::move(y)),
        b_(beta),
        mu_(mu),
        s_(sigma) {}

  template <class T>
  T log_lik(std::span<const T> x) const {
    T acc(0.0);
    for (std::size_t t = 0; t < y_->size(); ++t) {
      const double y2 = (*y_)[t] * (*y_)[t];
      acc += -0.5 * (x[t] + y2 * ad::exp(-x[t]));
    }
    return acc - 0.5 * kLog2Pi * static_cast<double>(y_->size());
  }
  template <class T>
  T log_prior(std::span<const T> x) const {
    T acc = ad::normal_logpdf(x[0], mu_, s_ / std::sqrt(1.0 - b_ * b_));
    for (std::size_t t = 1; t < x.size(); ++t)
      acc += ad::normal_logpdf(x[t] - b_ * x[t - 1], mu_ * (1.0 - b_), s_);
    return acc;
  }

  StructuredMatrix prior_precision() const override {
    StructuredMatrix p(structure_);
    const double w = 1.0 / (s_ * s_);
    const Eigen::Index n = p.diag.size();
    p.diag.setConstant((1.0 + b_ * b_) * w);
    p.diag[0] = w;
    p.diag[n - 1] = w;
    p.offdiag.setConstant(-b_ * w);
    return p;
  }
  Vector prior_mean() const override {
    return Vector::Constant(static_cast<Eigen::Index>(y_->size()), mu_);
  }
  Vector latent_prior_transform(std::span<const double> u) const override {
    Vector x(static_cast<Eigen::Index>(y_->size()));
    x[0] = mu_ + s_ / std::sqrt(1.0 - b_ * b_) * normal_quantile(u[0]);
    for (Eigen::Index t = 1; t < x.size(); ++t)
      x[t] = mu_ + b_ * (x[t - 1] - mu_) + s_ * normal_quantile(u[static_cast<std::size_t>(t)]);
    return x;
  }

 private:
  std::shared_ptr<const std::vector<double>> y_;
  double b_, mu_, s_;
};

class Sv : public HierarchicalModel {
 public:
  Sv(SvConfig cfg, std::shared_ptr<const std::vector<double>> y) : cfg_(cfg), y_(std::move(y)) {}

  std::string name() const override { return "sv"; }
  std::size_t theta_dim() const override { return 3; }
  std::size_t latent_dim() const override { return y_->size(); }
  std::vector<std::string> theta_names() const override { return {"psi_beta", "mu", "psi_sigma"}; }
  LatentStructure structure() const override { return LatentStructure::tridiagonal(y_->size()); }

  // (beta + 1) / 2 ~ Beta(20, 1.5), mu ~ Cauchy(0, 5), sigma ~ HalfCauchy(0, 2)
  Vector prior_transform(std::span<const double> u) const override {
    const double p = boost::math::ibeta_inv(20.0, 1.5, u[0]);
    const double sigma = 2.0 * std::tan(0.5 * M_PI * u[2]);
    Vector t(3);
    t << std::log(p / (1.0 - p)), 5.0 * std::tan(M_PI * (u[1] - 0.5)), std::log(sigma);
    return t;
  }
  std::shared_ptr<const BoundModel> bind(std::span<const double> t) const override {
    const double beta = std::tanh(0.5 * t[0]);
    const double sigma = std::exp(t[2]);
    detail::require_positive(sigma, "sigma");
    detail::require_positive(1.0 - beta * beta, "1 - beta^2");
    return std::make_shared<SvBound>(y_, beta, t[1], sigma);
  }

  json params() const override {
    return {{"steps", cfg_.steps},
            {"beta_true", cfg_.beta_true},
            {"mu_true", cfg_.mu_true},
            {"sigma_true", cfg_.sigma_true},
            {"seed", cfg_.seed}};
  }
  SyntheticDataset dataset() const override {
    SyntheticDataset s;
    s.model = name();
    s.seed = cfg_.seed;
    s.observations = {{"y", *y_}};
    s.truth = {{"beta", cfg_.beta_true}, {"mu", cfg_.mu_true}, {"sigma", cfg_.sigma_true}};
    return s;
  }

 private:
  SvConfig cfg_;
  std::shared_ptr<const std::vector<double>> y_;
};

}  // namespace

ModelPtr make_sv(const SvConfig& cfg) {
  if (cfg.steps < 2) throw ConfigError("sv needs T >= 2");
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto y = std::make_shared<std::vector<double>>();
  const double b = cfg.beta_true, mu = cfg.mu_true, s = cfg.sigma_true;
  double x = mu + s / std::sqrt(1.0 - b * b) * normal(rng);
  for (std::size_t t = 0; t < cfg.steps; ++t) {
    if (t > 0) x = mu + b * (x - mu) + s * normal(rng);
    y->push_back(std::exp(0.5 * x) * normal(rng));
  }
  return std::make_shared<Sv>(cfg, y);
}

namespace detail {
ModelPtr sv_from(const SvConfig& cfg, const SyntheticDataset& s) {
  auto y = std::make_shared<std::vector<double>>(s.observations.at("y").get<std::vector<double>>());
  if (y->size() < 2) throw ConfigError("sv dataset needs T >= 2");
  SvConfig c = cfg;
  c.steps = y->size();
  c.seed = s.seed;
  return std::make_shared<Sv>(c, y);
}
}  // namespace detail

}  // namespace alcs
