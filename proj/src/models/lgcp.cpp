#include <cmath>
#include <random>

#include "internal.hpp"

namespace alcs {

namespace {

struct LgcpData {
  std::size_t grid = 0;
  std::vector<double> counts;
  std::vector<double> log_count_factorial;  // lgamma(c + 1)
  double offset = 0.0;                      // log of the mean count
};

// Cell centres at integer coordinates, so l is measured in cells.
Matrix matern32(std::size_t grid, double a, double l) {
  const std::size_t n = grid * grid;
  Matrix k(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double dx = static_cast<double>(i % grid) - static_cast<double>(j % grid);
      const double dy = static_cast<double>(i / grid) - static_cast<double>(j / grid);
      const double s = std::sqrt(3.0) * std::sqrt(dx * dx + dy * dy) / l;
      const double v = a * a * (1.0 + s) * std::exp(-s);
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return k;
}

class LgcpBound : public BoundModelBase<LgcpBound> {
 public:
  LgcpBound(std::shared_ptr<const LgcpData> d, double a, double l)
      : BoundModelBase(LatentStructure::dense(d->counts.size())), d_(std::move(d)) {
    const Matrix k = matern32(d_->grid, a, l);
    Eigen::LLT<Matrix> llt(k);
    if (llt.info() != Eigen::Success) {
      const Eigen::Index n = k.rows();
      llt.compute(k + 1e-8 * Matrix::Identity(n, n));
      flags_ |= 1u << 5;
      if (llt.info() != Eigen::Success) throw DegeneratePrior("Matern kernel not positive definite");
    }
    chol_ = llt.matrixL();
    half_logdet_k_ = chol_.diagonal().array().log().sum();
    const Eigen::Index n = k.rows();
    q_ = llt.solve(Matrix::Identity(n, n));
    q_ = 0.5 * (q_ + q_.transpose()).eval();
  }

  std::uint32_t flags() const override { return flags_; }

  template <class T>
  T log_lik(std::span<const T> z) const {
    T acc(0.0);
    for (std::size_t m = 0; m < z.size(); ++m) {
      const T eta = z[m] + d_->offset;
      acc += d_->counts[m] * eta - ad::exp(eta) - d_->log_count_factorial[m];
    }
    return acc;
  }
  template <class T>
  T log_prior(std::span<const T> z) const {
    const std::size_t n = z.size();
    T quad(0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::span<const double> row(q_.data() + i * n, n);  // symmetric: column = row
      quad += z[i] * ad::dot(row, z);
    }
    return -0.5 * quad - half_logdet_k_ - 0.5 * static_cast<double>(n) * kLog2Pi;
  }

  StructuredMatrix prior_precision() const override {
    return StructuredMatrix::from_dense(q_, structure_);
  }
  Vector prior_mean() const override { return Vector::Zero(q_.rows()); }
  Vector latent_prior_transform(std::span<const double> u) const override {
    Vector e(q_.rows());
    for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = normal_quantile(u[static_cast<std::size_t>(i)]);
    return chol_ * e;
  }

 private:
  std::shared_ptr<const LgcpData> d_;
  Matrix chol_, q_;
  double half_logdet_k_ = 0.0;
  std::uint32_t flags_ = 0;
};

class Lgcp : public HierarchicalModel {
 public:
  Lgcp(LgcpConfig cfg, std::shared_ptr<const LgcpData> d) : cfg_(cfg), d_(std::move(d)) {}

  std::string name() const override { return "lgcp"; }
  std::size_t theta_dim() const override { return 2; }
  std::size_t latent_dim() const override { return d_->counts.size(); }
  std::vector<std::string> theta_names() const override { return {"log_a", "log_l"}; }
  LatentStructure structure() const override { return LatentStructure::dense(latent_dim()); }

  // log a ~ N(-1, 0.5^2), log l ~ N(-1, 1)
  Vector prior_transform(std::span<const double> u) const override {
    Vector t(2);
    t << -1.0 + 0.5 * normal_quantile(u[0]), -1.0 + normal_quantile(u[1]);
    return t;
  }
  std::shared_ptr<const BoundModel> bind(std::span<const double> t) const override {
    const double a = std::exp(t[0]), l = std::exp(t[1]);
    detail::require_positive(a, "amplitude");
    detail::require_positive(l, "length-scale");
    return std::make_shared<LgcpBound>(d_, a, l);
  }

  json params() const override {
    return {{"grid", cfg_.grid},
            {"log_a_true", cfg_.log_a_true},
            {"log_l_true", cfg_.log_l_true},
            {"mean_count", cfg_.mean_count},
            {"seed", cfg_.seed}};
  }
  SyntheticDataset dataset() const override {
    SyntheticDataset s;
    s.model = name();
    s.seed = cfg_.seed;
    s.observations = {{"grid", d_->grid}, {"counts", d_->counts}};
    s.truth = {{"log_a", cfg_.log_a_true}, {"log_l", cfg_.log_l_true}};
    return s;
  }

 private:
  LgcpConfig cfg_;
  std::shared_ptr<const LgcpData> d_;
};

std::shared_ptr<LgcpData> finish(std::size_t grid, std::vector<double> counts) {
  auto d = std::make_shared<LgcpData>();
  d->grid = grid;
  double mean = 0.0;
  for (double c : counts) {
    d->log_count_factorial.push_back(std::lgamma(c + 1.0));
    mean += c;
  }
  mean /= static_cast<double>(counts.size());
  d->offset = std::log(mean + 1e-9);
  d->counts = std::move(counts);
  return d;
}

}  // namespace

ModelPtr make_lgcp(const LgcpConfig& cfg) {
  if (cfg.grid < 1) throw ConfigError("lgcp grid must be >= 1");
  const std::size_t n = cfg.grid * cfg.grid;
  Matrix k = matern32(cfg.grid, std::exp(cfg.log_a_true), std::exp(cfg.log_l_true));
  Eigen::LLT<Matrix> llt(k + 1e-10 * Matrix::Identity(k.rows(), k.rows()));
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector e(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = normal(rng);
  const Vector phi = llt.matrixL() * e;
  std::vector<double> counts;
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    std::poisson_distribution<long> pois(std::exp(phi[i] + std::log(cfg.mean_count)));
    counts.push_back(static_cast<double>(pois(rng)));
  }
  return std::make_shared<Lgcp>(cfg, finish(cfg.grid, std::move(counts)));
}

namespace detail {
ModelPtr lgcp_from(const LgcpConfig& cfg, const SyntheticDataset& s) {
  LgcpConfig c = cfg;
  c.grid = s.observations.at("grid").get<std::size_t>();
  c.seed = s.seed;
  auto counts = s.observations.at("counts").get<std::vector<double>>();
  if (counts.size() != c.grid * c.grid) throw ConfigError("lgcp dataset: counts do not fill grid");
  return std::make_shared<Lgcp>(c, finish(c.grid, std::move(counts)));
}
}  // namespace detail

}  // namespace alcs
