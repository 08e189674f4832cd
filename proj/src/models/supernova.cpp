#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "internal.hpp"

namespace alcs {

namespace {

constexpr double kSigmaMag = 0.1;    // peak magnitude noise
constexpr double kSigmaX1 = 0.3;     // stretch measurement noise
constexpr double kSigmaC = 0.05;     // colour measurement noise
constexpr double kPriorX1 = 1.0;     // prior sd of x1
constexpr double kPriorC = 0.1;      // prior sd of c
constexpr double kHubbleDistance = 299792.458 / 70.0;  // c / H0 in Mpc

// Flat w-cosmology distance modulus.
double distance_modulus(double z, double omega_m, double w0) {
  auto inv_e = [&](double zp) {
    const double a = 1.0 + zp;
    return 1.0 / std::sqrt(omega_m * a * a * a + (1.0 - omega_m) * std::pow(a, 3.0 * (1.0 + w0)));
  };
  const double chi = boost::math::quadrature::gauss<double, 30>::integrate(inv_e, 0.0, z);
  const double dl = (1.0 + z) * kHubbleDistance * chi;
  return 5.0 * std::log10(dl) + 25.0;
}

struct SneData {
  std::size_t bands = 1;
  std::vector<double> redshift, mag;
  std::vector<std::vector<double>> x1_obs, c_obs;  // per object, per band
};

// Per object: z = (x1_1, c_1, ..., x1_B, c_B) ~ N(0, diag(1, 0.01, ...)),
// mag ~ N(mu(z_obs) + M - alpha mean(x1) + beta mean(c), 0.1^2),
// x1_obs ~ N(x1, 0.3^2), c_obs ~ N(c, 0.05^2).
class SneBound : public BoundModelBase<SneBound> {
 public:
  SneBound(std::shared_ptr<const SneData> d, std::vector<double> mean_mag, double alpha, double beta)
      : BoundModelBase(LatentStructure::uniform_blocks(d->mag.size(), 2 * d->bands)),
        d_(std::move(d)),
        mean_mag_(std::move(mean_mag)),
        alpha_(alpha),
        beta_(beta) {}

  ad::DiffFunction block_log_joint(std::size_t b) const override { return make_block(b); }

  template <class T>
  T object_lik(std::size_t i, std::span<const T> z) const {
    const std::size_t nb = d_->bands;
    T tripp(0.0);
    T acc(0.0);
    for (std::size_t k = 0; k < nb; ++k) {
      tripp += (beta_ * z[2 * k + 1] - alpha_ * z[2 * k]) / static_cast<double>(nb);
      acc += ad::normal_logpdf(z[2 * k], d_->x1_obs[i][k], kSigmaX1);
      acc += ad::normal_logpdf(z[2 * k + 1], d_->c_obs[i][k], kSigmaC);
    }
    return acc + ad::normal_logpdf(tripp + mean_mag_[i], d_->mag[i], kSigmaMag);
  }
  template <class T>
  T object_prior(std::span<const T> z) const {
    T acc(0.0);
    for (std::size_t k = 0; k < d_->bands; ++k) {
      acc += ad::normal_logpdf(z[2 * k], 0.0, kPriorX1);
      acc += ad::normal_logpdf(z[2 * k + 1], 0.0, kPriorC);
    }
    return acc;
  }
  template <class T>
  T block_term(std::size_t i, std::span<const T> z) const {
    return object_lik(i, z) + object_prior(z);
  }
  template <class T>
  T log_lik(std::span<const T> z) const {
    const std::size_t w = 2 * d_->bands;
    T acc(0.0);
    for (std::size_t i = 0; i < d_->mag.size(); ++i) acc += object_lik(i, z.subspan(i * w, w));
    return acc;
  }
  template <class T>
  T log_prior(std::span<const T> z) const {
    const std::size_t w = 2 * d_->bands;
    T acc(0.0);
    for (std::size_t i = 0; i < d_->mag.size(); ++i) acc += object_prior(z.subspan(i * w, w));
    return acc;
  }

  StructuredMatrix prior_precision() const override {
    StructuredMatrix p(structure_);
    for (auto& blk : p.blocks)
      for (Eigen::Index k = 0; k < blk.rows(); ++k)
        blk(k, k) = k % 2 == 0 ? 1.0 / (kPriorX1 * kPriorX1) : 1.0 / (kPriorC * kPriorC);
    return p;
  }
  Vector prior_mean() const override { return Vector::Zero(static_cast<Eigen::Index>(structure_.dim)); }
  Vector latent_prior_transform(std::span<const double> u) const override {
    Vector z(static_cast<Eigen::Index>(structure_.dim));
    for (Eigen::Index k = 0; k < z.size(); ++k)
      z[k] = (k % 2 == 0 ? kPriorX1 : kPriorC) * normal_quantile(u[static_cast<std::size_t>(k)]);
    return z;
  }

 private:
  std::shared_ptr<const SneData> d_;
  std::vector<double> mean_mag_;
  double alpha_, beta_;
};

class Sne : public HierarchicalModel {
 public:
  Sne(SneConfig cfg, std::shared_ptr<const SneData> d, json truth)
      : cfg_(cfg), d_(std::move(d)), truth_(std::move(truth)) {}

  std::string name() const override { return "sne"; }
  std::size_t theta_dim() const override { return cfg_.cosmology == Cosmology::WCDM ? 3 : 2; }
  std::size_t latent_dim() const override { return d_->mag.size() * 2 * d_->bands; }
  std::vector<std::string> theta_names() const override {
    if (cfg_.cosmology == Cosmology::WCDM) return {"omega_m", "M", "w0"};
    return {"omega_m", "M"};
  }
  LatentStructure structure() const override {
    return LatentStructure::uniform_blocks(d_->mag.size(), 2 * d_->bands);
  }

  // Omega_m ~ U(0.05, 0.6), M ~ U(-19.8, -18.8), w0 ~ U(-2, -1/3)
  Vector prior_transform(std::span<const double> u) const override {
    Vector t(static_cast<Eigen::Index>(theta_dim()));
    t[0] = 0.05 + 0.55 * u[0];
    t[1] = -19.8 + u[1];
    if (cfg_.cosmology == Cosmology::WCDM) t[2] = -2.0 + (2.0 - 1.0 / 3.0) * u[2];
    return t;
  }
  std::shared_ptr<const BoundModel> bind(std::span<const double> t) const override {
    return std::make_shared<SneBound>(d_, mean_magnitudes(t), cfg_.alpha, cfg_.beta);
  }

  ExactKind exact_kind() const override { return ExactKind::Analytic; }
  // Observations o = A z + b(theta) + noise, z ~ N(0, S): o ~ N(b, A S A^T + R).
  double exact_marginal(std::span<const double> t) const override {
    const std::size_t nb = d_->bands, dz = 2 * nb, no = 1 + dz;
    const auto mm = mean_magnitudes(t);
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(no), static_cast<Eigen::Index>(dz));
    Vector s(static_cast<Eigen::Index>(dz)), r(static_cast<Eigen::Index>(no));
    r[0] = kSigmaMag * kSigmaMag;
    for (std::size_t k = 0; k < nb; ++k) {
      const auto x = static_cast<Eigen::Index>(2 * k), c = x + 1;
      a(0, x) = -cfg_.alpha / static_cast<double>(nb);
      a(0, c) = cfg_.beta / static_cast<double>(nb);
      a(1 + x, x) = 1.0;
      a(1 + c, c) = 1.0;
      s[x] = kPriorX1 * kPriorX1;
      s[c] = kPriorC * kPriorC;
      r[1 + x] = kSigmaX1 * kSigmaX1;
      r[1 + c] = kSigmaC * kSigmaC;
    }
    Matrix cov = a * s.asDiagonal() * a.transpose();
    cov.diagonal() += r;
    Eigen::LLT<Matrix> llt(cov);
    const double half_logdet = Eigen::Index(0) < cov.rows()
                                   ? llt.matrixLLT().diagonal().array().log().sum()
                                   : 0.0;
    double acc = 0.0;
    Vector o(static_cast<Eigen::Index>(no));
    for (std::size_t i = 0; i < d_->mag.size(); ++i) {
      o[0] = d_->mag[i] - mm[i];
      for (std::size_t k = 0; k < nb; ++k) {
        o[static_cast<Eigen::Index>(1 + 2 * k)] = d_->x1_obs[i][k];
        o[static_cast<Eigen::Index>(2 + 2 * k)] = d_->c_obs[i][k];
      }
      const Vector w = llt.matrixL().solve(o);
      acc += -0.5 * (static_cast<double>(no) * kLog2Pi + w.squaredNorm()) - half_logdet;
    }
    return acc;
  }

  json params() const override {
    return {{"objects", cfg_.objects},
            {"block", cfg_.block},
            {"cosmology", cfg_.cosmology == Cosmology::WCDM ? "wcdm" : "lcdm"},
            {"alpha", cfg_.alpha},
            {"beta", cfg_.beta},
            {"seed", cfg_.seed}};
  }
  SyntheticDataset dataset() const override {
    SyntheticDataset s;
    s.model = name();
    s.seed = cfg_.seed;
    s.observations = {{"bands", d_->bands},   {"redshift", d_->redshift}, {"mag", d_->mag},
                      {"x1_obs", d_->x1_obs}, {"c_obs", d_->c_obs}};
    s.truth = truth_;
    return s;
  }

 private:
  std::vector<double> mean_magnitudes(std::span<const double> t) const {
    const double w0 = cfg_.cosmology == Cosmology::WCDM ? t[2] : -1.0;
    std::vector<double> m(d_->redshift.size());
    for (std::size_t i = 0; i < m.size(); ++i)
      m[i] = distance_modulus(d_->redshift[i], t[0], w0) + t[1];
    return m;
  }

  SneConfig cfg_;
  std::shared_ptr<const SneData> d_;
  json truth_;
};

}  // namespace

ModelPtr make_sne(const SneConfig& cfg) {
  if (cfg.objects < 1) throw ConfigError("sne needs N >= 1");
  if (cfg.block < 2 || cfg.block % 2 != 0) throw ConfigError("sne block size must be even");
  constexpr double kOmega = 0.3, kM = -19.3, kW0 = -1.0;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto d = std::make_shared<SneData>();
  d->bands = cfg.block / 2;
  const double nb = static_cast<double>(d->bands);
  for (std::size_t i = 0; i < cfg.objects; ++i) {
    const double zr = cfg.objects == 1 ? 0.1
                                       : 0.1 + 0.9 * static_cast<double>(i) /
                                                   static_cast<double>(cfg.objects - 1);
    d->redshift.push_back(zr);
    double tripp = 0.0;
    std::vector<double> x1o, co;
    for (std::size_t k = 0; k < d->bands; ++k) {
      const double x1 = kPriorX1 * normal(rng), c = kPriorC * normal(rng);
      tripp += (cfg.beta * c - cfg.alpha * x1) / nb;
      x1o.push_back(x1 + kSigmaX1 * normal(rng));
      co.push_back(c + kSigmaC * normal(rng));
    }
    const double w0 = cfg.cosmology == Cosmology::WCDM ? kW0 : -1.0;
    d->mag.push_back(distance_modulus(zr, kOmega, w0) + kM + tripp + kSigmaMag * normal(rng));
    d->x1_obs.push_back(std::move(x1o));
    d->c_obs.push_back(std::move(co));
  }
  json truth = {{"omega_m", kOmega}, {"M", kM}, {"w0", kW0}};
  return std::make_shared<Sne>(cfg, d, truth);
}

namespace detail {
ModelPtr sne_from(const SneConfig& cfg, const SyntheticDataset& s) {
  auto d = std::make_shared<SneData>();
  d->bands = s.observations.at("bands").get<std::size_t>();
  s.observations.at("redshift").get_to(d->redshift);
  s.observations.at("mag").get_to(d->mag);
  s.observations.at("x1_obs").get_to(d->x1_obs);
  s.observations.at("c_obs").get_to(d->c_obs);
  const std::size_t n = d->mag.size();
  if (n == 0 || d->redshift.size() != n || d->x1_obs.size() != n || d->c_obs.size() != n)
    throw ConfigError("sne dataset malformed");
  SneConfig c = cfg;
  c.objects = n;
  c.block = 2 * d->bands;
  c.seed = s.seed;
  return std::make_shared<Sne>(c, d, s.truth);
}
}  // namespace detail

}  // namespace alcs
