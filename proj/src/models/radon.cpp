#include <cmath>
#include <random>

#include "internal.hpp"

namespace alcs {

namespace {

struct RadonData {
  std::vector<std::vector<double>> y, x;  // per county
};

class RadonBound : public BoundModelBase<RadonBound> {
 public:
  RadonBound(std::shared_ptr<const RadonData> d, double mu, double beta, double sa, double sy)
      : BoundModelBase(LatentStructure::diagonal(d->y.size())),
        d_(std::move(d)),
        mu_(mu),
        beta_(beta),
        sa_(sa),
        sy_(sy) {}

  bool separable() const override { return true; }
  ad::DiffFunction block_log_joint(std::size_t b) const override { return make_block(b); }

  template <class T>
  T county_lik(std::size_t j, const T& z) const {
    T acc(0.0);
    const auto& y = d_->y[j];
    const auto& x = d_->x[j];
    for (std::size_t i = 0; i < y.size(); ++i) acc += ad::normal_logpdf(z + beta_ * x[i], y[i], sy_);
    return acc;
  }
  template <class T>
  T block_term(std::size_t j, std::span<const T> z) const {
    return county_lik(j, z[0]) + ad::normal_logpdf(z[0], mu_, sa_);
  }
  template <class T>
  T log_lik(std::span<const T> z) const {
    T acc(0.0);
    for (std::size_t j = 0; j < d_->y.size(); ++j) acc += county_lik(j, z[j]);
    return acc;
  }
  template <class T>
  T log_prior(std::span<const T> z) const {
    T acc(0.0);
    for (std::size_t j = 0; j < d_->y.size(); ++j) acc += ad::normal_logpdf(z[j], mu_, sa_);
    return acc;
  }

  StructuredMatrix prior_precision() const override {
    return StructuredMatrix::identity(structure_, 1.0 / (sa_ * sa_));
  }
  Vector prior_mean() const override {
    return Vector::Constant(static_cast<Eigen::Index>(d_->y.size()), mu_);
  }
  Vector latent_prior_transform(std::span<const double> u) const override {
    Vector z(static_cast<Eigen::Index>(d_->y.size()));
    for (Eigen::Index j = 0; j < z.size(); ++j)
      z[j] = mu_ + sa_ * normal_quantile(u[static_cast<std::size_t>(j)]);
    return z;
  }

 private:
  std::shared_ptr<const RadonData> d_;
  double mu_, beta_, sa_, sy_;
};

class Radon : public HierarchicalModel {
 public:
  Radon(RadonConfig cfg, std::shared_ptr<const RadonData> d, json truth)
      : cfg_(cfg), d_(std::move(d)), truth_(std::move(truth)) {}

  std::string name() const override { return "radon"; }
  std::size_t theta_dim() const override { return 4; }
  std::size_t latent_dim() const override { return d_->y.size(); }
  std::vector<std::string> theta_names() const override {
    return {"mu_alpha", "beta", "log_sigma_alpha", "log_sigma_y"};
  }
  LatentStructure structure() const override { return LatentStructure::diagonal(latent_dim()); }

  Vector prior_transform(std::span<const double> u) const override {
    Vector t(4);
    t << -5.0 + 10.0 * u[0], -3.0 + 4.0 * u[1], -5.0 + 7.0 * u[2], -5.0 + 7.0 * u[3];
    return t;
  }
  std::shared_ptr<const BoundModel> bind(std::span<const double> t) const override {
    const double sa = std::exp(t[2]), sy = std::exp(t[3]);
    detail::require_positive(sa, "sigma_alpha");
    detail::require_positive(sy, "sigma_y");
    return std::make_shared<RadonBound>(d_, t[0], t[1], sa, sy);
  }

  ExactKind exact_kind() const override { return ExactKind::Analytic; }
  // Per county y ~ N(mu 1 + beta x, sy^2 I + sa^2 1 1^T), inverted by Sherman-Morrison.
  double exact_marginal(std::span<const double> t) const override {
    const double mu = t[0], beta = t[1];
    const double sa2 = std::exp(2.0 * t[2]), sy2 = std::exp(2.0 * t[3]);
    double acc = 0.0;
    for (std::size_t j = 0; j < d_->y.size(); ++j) {
      const auto& y = d_->y[j];
      const auto& x = d_->x[j];
      const double n = static_cast<double>(y.size());
      double rr = 0.0, rs = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - mu - beta * x[i];
        rr += r * r;
        rs += r;
      }
      const double denom = sy2 + n * sa2;
      const double quad = (rr - sa2 * rs * rs / denom) / sy2;
      const double logdet = n * std::log(sy2) + std::log1p(n * sa2 / sy2);
      acc += -0.5 * (n * kLog2Pi + logdet + quad);
    }
    return acc;
  }

  json params() const override {
    return {{"counties", cfg_.counties}, {"per_county", cfg_.per_county}, {"seed", cfg_.seed}};
  }
  SyntheticDataset dataset() const override {
    SyntheticDataset s;
    s.model = name();
    s.seed = cfg_.seed;
    s.observations = {{"y", d_->y}, {"x", d_->x}};
    s.truth = truth_;
    return s;
  }

 private:
  RadonConfig cfg_;
  std::shared_ptr<const RadonData> d_;
  json truth_;
};

}  // namespace

ModelPtr make_radon(const RadonConfig& cfg) {
  if (cfg.counties < 1 || cfg.per_county < 1) throw ConfigError("radon needs J >= 1 and n >= 1");
  constexpr double kMu = 1.5, kBeta = -0.7, kSa = 0.3, kSy = 0.8;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution floor(0.5);
  auto d = std::make_shared<RadonData>();
  for (std::size_t j = 0; j < cfg.counties; ++j) {
    const double alpha = kMu + kSa * normal(rng);
    std::vector<double> y, x;
    for (std::size_t i = 0; i < cfg.per_county; ++i) {
      const double xi = floor(rng) ? 1.0 : 0.0;
      x.push_back(xi);
      y.push_back(alpha + kBeta * xi + kSy * normal(rng));
    }
    d->y.push_back(std::move(y));
    d->x.push_back(std::move(x));
  }
  json truth = {{"mu_alpha", kMu}, {"beta", kBeta}, {"sigma_alpha", kSa}, {"sigma_y", kSy}};
  return std::make_shared<Radon>(cfg, d, truth);
}

namespace detail {
ModelPtr radon_from(const RadonConfig& cfg, const SyntheticDataset& s) {
  auto d = std::make_shared<RadonData>();
  s.observations.at("y").get_to(d->y);
  s.observations.at("x").get_to(d->x);
  if (d->y.size() != d->x.size() || d->y.empty()) throw ConfigError("radon dataset malformed");
  RadonConfig c = cfg;
  c.counties = d->y.size();
  c.seed = s.seed;
  return std::make_shared<Radon>(c, d, s.truth);
}
}  // namespace detail

}  // namespace alcs
