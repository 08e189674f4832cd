#include <cmath>
#include <random>

#include "internal.hpp"

namespace alcs {

namespace {

// x_0 ~ N(0, s^2), x_t ~ N(x_{t-1}, s^2), y_t ~ N(x_t, 1).
class BrownianBound : public BoundModelBase<BrownianBound> {
 public:
  BrownianBound(std::shared_ptr<const std::vector<double>> y, double sigma)
      : BoundModelBase(LatentStructure::tridiagonal(y->size())), y_(std::move(y)), s_(sigma) {}

  template <class T>
  T log_lik(std::span<const T> z) const {
    T acc(0.0);
    for (std::size_t t = 0; t < y_->size(); ++t) acc += ad::normal_logpdf(z[t], (*y_)[t], 1.0);
    return acc;
  }
  template <class T>
  T log_prior(std::span<const T> z) const {
    T acc = ad::normal_logpdf(z[0], 0.0, s_);
    for (std::size_t t = 1; t < z.size(); ++t) acc += ad::normal_logpdf(z[t] - z[t - 1], 0.0, s_);
    return acc;
  }

  StructuredMatrix prior_precision() const override {
    StructuredMatrix p(structure_);
    const double w = 1.0 / (s_ * s_);
    const Eigen::Index n = p.diag.size();
    p.diag.setConstant(2.0 * w);
    p.diag[n - 1] = w;
    p.offdiag.setConstant(-w);
    return p;
  }
  Vector prior_mean() const override { return Vector::Zero(static_cast<Eigen::Index>(y_->size())); }
  Vector latent_prior_transform(std::span<const double> u) const override {
    Vector z(static_cast<Eigen::Index>(y_->size()));
    double prev = 0.0;
    for (Eigen::Index t = 0; t < z.size(); ++t) {
      prev += s_ * normal_quantile(u[static_cast<std::size_t>(t)]);
      z[t] = prev;
    }
    return z;
  }

 private:
  std::shared_ptr<const std::vector<double>> y_;
  double s_;
};

class Brownian : public HierarchicalModel {
 public:
  Brownian(BrownianConfig cfg, std::shared_ptr<const std::vector<double>> y)
      : cfg_(cfg), y_(std::move(y)) {}

  std::string name() const override { return "brownian"; }
  std::size_t theta_dim() const override { return 1; }
  std::size_t latent_dim() const override { return y_->size(); }
  std::vector<std::string> theta_names() const override { return {"log_sigma"}; }
  LatentStructure structure() const override { return LatentStructure::tridiagonal(y_->size()); }

  Vector prior_transform(std::span<const double> u) const override {
    const double lo = std::log(0.01), hi = std::log(10.0);
    return Vector::Constant(1, lo + (hi - lo) * u[0]);
  }
  std::shared_ptr<const BoundModel> bind(std::span<const double> t) const override {
    const double s = std::exp(t[0]);
    detail::require_positive(s, "sigma");
    return std::make_shared<BrownianBound>(y_, s);
  }

  ExactKind exact_kind() const override { return ExactKind::Kalman; }
  double exact_marginal(std::span<const double> t) const override {
    const double q = std::exp(2.0 * t[0]);
    double m = 0.0, p = q, acc = 0.0;
    for (double y : *y_) {
      const double s = p + 1.0;
      const double r = y - m;
      acc += -0.5 * (kLog2Pi + std::log(s) + r * r / s);
      const double k = p / s;
      m += k * r;
      p = (1.0 - k) * p + q;
    }
    return acc;
  }

  json params() const override {
    return {{"steps", cfg_.steps}, {"sigma_true", cfg_.sigma_true}, {"seed", cfg_.seed}};
  }
  SyntheticDataset dataset() const override {
    SyntheticDataset s;
    s.model = name();
    s.seed = cfg_.seed;
    s.observations = {{"y", *y_}};
    s.truth = {{"sigma", cfg_.sigma_true}};
    return s;
  }

 private:
  BrownianConfig cfg_;
  std::shared_ptr<const std::vector<double>> y_;
};

}  // namespace

ModelPtr make_brownian(const BrownianConfig& cfg) {
  if (cfg.steps < 2) throw ConfigError("brownian needs T >= 2");
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto y = std::make_shared<std::vector<double>>();
  double x = 0.0;
  for (std::size_t t = 0; t < cfg.steps; ++t) {
    x += cfg.sigma_true * normal(rng);
    y->push_back(x + normal(rng));
  }
  return std::make_shared<Brownian>(cfg, y);
}

double kalman_marginal(const HierarchicalModel& brownian, double log_sigma) {
  if (brownian.name() != "brownian") throw ModelError("kalman_marginal needs the brownian model");
  const double t[1] = {log_sigma};
  return brownian.exact_marginal(t);
}

namespace detail {
ModelPtr brownian_from(const BrownianConfig& cfg, const SyntheticDataset& s) {
  auto y = std::make_shared<std::vector<double>>(s.observations.at("y").get<std::vector<double>>());
  if (y->size() < 2) throw ConfigError("brownian dataset needs T >= 2");
  BrownianConfig c = cfg;
  c.steps = y->size();
  c.seed = s.seed;
  return std::make_shared<Brownian>(c, y);
}
}  // namespace detail

}  // namespace alcs
