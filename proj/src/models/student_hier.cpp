#include <cmath>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "alcs/collapse/collapse.hpp"
#include "alcs/models/quadrature.hpp"
#include "internal.hpp"

namespace alcs {

namespace {

// z_i ~ t_nu(mu, sigma), y_i ~ N(z_i, 1).
class StudentBound : public BoundModelBase<StudentBound> {
 public:
  StudentBound(std::shared_ptr<const std::vector<double>> y, double nu, double mu, double sigma)
      : BoundModelBase(LatentStructure::diagonal(y->size())),
        y_(std::move(y)),
        nu_(nu),
        mu_(mu),
        s_(sigma),
        norm_(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * M_PI) -
              std::log(sigma)) {}

  bool separable() const override { return true; }
  ad::DiffFunction block_log_joint(std::size_t b) const override { return make_block(b); }

  template <class T>
  T t_logpdf(const T& z) const {
    const T r = (z - mu_) / s_;
    return norm_ - 0.5 * (nu_ + 1.0) * ad::log(1.0 + r * r / nu_);
  }
  template <class T>
  T block_term(std::size_t i, std::span<const T> z) const {
    return ad::normal_logpdf(z[0], (*y_)[i], 1.0) + t_logpdf(z[0]);
  }
  template <class T>
  T log_lik(std::span<const T> z) const {
    T acc(0.0);
    for (std::size_t i = 0; i < y_->size(); ++i) acc += ad::normal_logpdf(z[i], (*y_)[i], 1.0);
    return acc;
  }
  template <class T>
  T log_prior(std::span<const T> z) const {
    T acc(0.0);
    for (std::size_t i = 0; i < z.size(); ++i) acc += t_logpdf(z[i]);
    return acc;
  }

  // Curvature of the t density at its mode.
  StructuredMatrix prior_precision() const override {
    return StructuredMatrix::identity(structure_, (nu_ + 1.0) / (nu_ * s_ * s_));
  }
  Vector prior_mean() const override { return Vector::Constant(static_cast<Eigen::Index>(y_->size()), mu_); }
  Vector latent_prior_transform(std::span<const double> u) const override {
    const boost::math::students_t_distribution<double> t(nu_);
    Vector z(static_cast<Eigen::Index>(y_->size()));
    for (Eigen::Index i = 0; i < z.size(); ++i)
      z[i] = mu_ + s_ * boost::math::quantile(t, u[static_cast<std::size_t>(i)]);
    return z;
  }

  double log_marginal_object(std::size_t i, bool& retried) const {
    const double y = (*y_)[i];
    const double lo = std::min(mu_ - 12.0 * s_, y - 12.0);
    const double hi = std::max(mu_ + 12.0 * s_, y + 12.0);
    auto f = [&](double z) { return ad::normal_logpdf(z, y, 1.0) + t_logpdf(z); };
    const auto q = log_quadrature(f, lo, hi);
    retried = retried || q.retried;
    return q.log_value;
  }

 private:
  std::shared_ptr<const std::vector<double>> y_;
  double nu_, mu_, s_, norm_;
};

class StudentHier : public HierarchicalModel {
 public:
  StudentHier(StudentHierConfig cfg, std::shared_ptr<const std::vector<double>> y)
      : cfg_(cfg), y_(std::move(y)) {}

  std::string name() const override { return "student_hier"; }
  std::size_t theta_dim() const override { return 2; }
  std::size_t latent_dim() const override { return y_->size(); }
  std::vector<std::string> theta_names() const override { return {"mu", "log_sigma"}; }
  LatentStructure structure() const override { return LatentStructure::diagonal(y_->size()); }

  Vector prior_transform(std::span<const double> u) const override {
    const double lo = std::log(0.1), hi = std::log(5.0);
    Vector t(2);
    t << -3.0 + 6.0 * u[0], lo + (hi - lo) * u[1];
    return t;
  }
  std::shared_ptr<const BoundModel> bind(std::span<const double> t) const override {
    const double s = std::exp(t[1]);
    detail::require_positive(s, "sigma");
    return std::make_shared<StudentBound>(y_, cfg_.nu, t[0], s);
  }

  ExactKind exact_kind() const override { return ExactKind::Quadrature; }
  double exact_marginal(std::span<const double> t) const override {
    const auto b = std::static_pointer_cast<const StudentBound>(bind(t));
    bool retried = false;
    double acc = 0.0;
    for (std::size_t i = 0; i < y_->size(); ++i) acc += b->log_marginal_object(i, retried);
    return acc;
  }

  json params() const override {
    return {{"objects", cfg_.objects},
            {"nu", cfg_.nu},
            {"mu_true", cfg_.mu_true},
            {"sigma_true", cfg_.sigma_true},
            {"seed", cfg_.seed}};
  }
  SyntheticDataset dataset() const override {
    SyntheticDataset s;
    s.model = name();
    s.seed = cfg_.seed;
    s.observations = {{"y", *y_}};
    s.truth = {{"mu", cfg_.mu_true}, {"sigma", cfg_.sigma_true}, {"nu", cfg_.nu}};
    return s;
  }

 private:
  StudentHierConfig cfg_;
  std::shared_ptr<const std::vector<double>> y_;
};

}  // namespace

ModelPtr make_student_hier(const StudentHierConfig& cfg) {
  if (cfg.objects < 1) throw ConfigError("student_hier needs N_obj >= 1");
  if (!(cfg.nu > 0.0)) throw ConfigError("student_hier needs nu > 0");
  std::mt19937_64 rng(cfg.seed);
  std::student_t_distribution<double> t(cfg.nu);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto y = std::make_shared<std::vector<double>>();
  for (std::size_t i = 0; i < cfg.objects; ++i) {
    const double z = cfg.mu_true + cfg.sigma_true * t(rng);
    y->push_back(z + normal(rng));
  }
  return std::make_shared<StudentHier>(cfg, y);
}

double quadrature_marginal(const HierarchicalModel& student, std::span<const double> theta) {
  if (student.name() != "student_hier")
    throw ModelError("quadrature_marginal needs the student_hier model");
  return student.exact_marginal(theta);
}

namespace detail {
ModelPtr student_hier_from(const StudentHierConfig& cfg, const SyntheticDataset& s) {
  auto y = std::make_shared<std::vector<double>>(s.observations.at("y").get<std::vector<double>>());
  if (y->empty()) throw ConfigError("student_hier dataset is empty");
  StudentHierConfig c = cfg;
  c.objects = y->size();
  c.seed = s.seed;
  return std::make_shared<StudentHier>(c, y);
}
}  // namespace detail

}  // namespace alcs
