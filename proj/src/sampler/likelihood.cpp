#include "alcs/sampler/likelihood.hpp"

#include <cmath>

#include "alcs/errors.hpp"

namespace alcs {

LikelihoodMode parse_mode(const std::string& s) {
  if (s == "gaussian") return LikelihoodMode::Gaussian;
  if (s == "student") return LikelihoodMode::Student;
  if (s == "exact-reference") return LikelihoodMode::ExactReference;
  if (s == "joint-full-ns") return LikelihoodMode::JointFullNs;
  throw ConfigError("unknown mode '" + s + "'");
}

std::string to_string(LikelihoodMode m) {
  switch (m) {
    case LikelihoodMode::Gaussian: return "gaussian";
    case LikelihoodMode::Student: return "student";
    case LikelihoodMode::ExactReference: return "exact-reference";
    case LikelihoodMode::JointFullNs: return "joint-full-ns";
  }
  return "?";
}

WarmPolicy parse_warm_policy(const std::string& s) {
  if (s == "per-point") return WarmPolicy::PerPoint;
  if (s == "fiducial") return WarmPolicy::Fiducial;
  if (s == "none") return WarmPolicy::None;
  throw ConfigError("unknown warm-start policy '" + s + "'");
}

std::string to_string(WarmPolicy w) {
  switch (w) {
    case WarmPolicy::PerPoint: return "per-point";
    case WarmPolicy::Fiducial: return "fiducial";
    case WarmPolicy::None: return "none";
  }
  return "?";
}

namespace {

class ModelLikelihood : public Likelihood {
 public:
  ModelLikelihood(ModelPtr m, LikelihoodSettings s) : m_(std::move(m)), s_(std::move(s)) {
    if (s_.mode == LikelihoodMode::ExactReference && m_->exact_kind() == ExactKind::None)
      throw ConfigError(m_->name() + " has no exact reference marginal");
  }

  std::size_t dim() const override {
    return m_->theta_dim() + (s_.mode == LikelihoodMode::JointFullNs ? m_->latent_dim() : 0);
  }

  std::vector<std::string> names() const override {
    auto n = m_->theta_names();
    if (s_.mode == LikelihoodMode::JointFullNs)
      for (std::size_t j = 0; j < m_->latent_dim(); ++j) n.push_back("z" + std::to_string(j));
    return n;
  }

  Vector params(std::span<const double> u) const override {
    const std::size_t dt = m_->theta_dim();
    Vector theta = m_->prior_transform(u.first(dt));
    if (s_.mode != LikelihoodMode::JointFullNs) return theta;
    const auto b = m_->bind(as_span(theta));
    Vector z = b->latent_prior_transform(u.subspan(dt));
    Vector out(theta.size() + z.size());
    out << theta, z;
    return out;
  }

  Evaluation evaluate(std::span<const double> u, const WarmStartCache* parent) const override {
    Evaluation e;
    try {
      const std::size_t dt = m_->theta_dim();
      const Vector theta = m_->prior_transform(u.first(dt));
      switch (s_.mode) {
        case LikelihoodMode::ExactReference:
          e.logl = m_->exact_marginal(as_span(theta));
          break;
        case LikelihoodMode::JointFullNs: {
          const auto b = m_->bind(as_span(theta));
          const Vector z = b->latent_prior_transform(u.subspan(dt));
          e.logl = b->log_likelihood(as_span(z));
          e.flags = b->flags();
          break;
        }
        default:
          collapse(theta, parent, e);
      }
    } catch (const DegeneratePrior&) {
      e.logl = -std::numeric_limits<double>::infinity();
      e.flags |= kEvalFailed;
    } catch (const NumericalError&) {
      e.logl = -std::numeric_limits<double>::infinity();
      e.flags |= kEvalFailed;
    }
    if (std::isnan(e.logl)) {
      e.logl = -std::numeric_limits<double>::infinity();
      e.flags |= kEvalFailed;
    }
    return e;
  }

 private:
  void collapse(const Vector& theta, const WarmStartCache* parent, Evaluation& e) const {
    const WarmStartCache* warm = nullptr;
    std::shared_ptr<const WarmStartCache> fid;
    if (s_.warm == WarmPolicy::PerPoint) {
      warm = parent;
    } else if (s_.warm == WarmPolicy::Fiducial) {
      std::lock_guard<std::mutex> lock(mu_);
      fid = fiducial_;
      warm = fid.get();
    }
    const auto b = m_->bind(as_span(theta));
    const CollapseResult r = s_.mode == LikelihoodMode::Student
                                 ? collapsed_loglik_student(*b, s_.student, s_.collapse, warm)
                                 : collapsed_loglik_gaussian(*b, s_.collapse, warm);
    e.logl = r.loglik;
    e.flags = r.flags;
    e.cache = r.cache;
    if (s_.warm == WarmPolicy::Fiducial && r.converged) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!fiducial_) fiducial_ = r.cache;
    }
  }

  ModelPtr m_;
  LikelihoodSettings s_;
  mutable std::mutex mu_;
  mutable std::shared_ptr<const WarmStartCache> fiducial_;
};

class FunctionLikelihood : public Likelihood {
 public:
  FunctionLikelihood(std::size_t dim, std::vector<std::string> names,
                     std::function<Vector(std::span<const double>)> t,
                     std::function<double(const Vector&)> l)
      : dim_(dim), names_(std::move(names)), t_(std::move(t)), l_(std::move(l)) {}

  std::size_t dim() const override { return dim_; }
  std::vector<std::string> names() const override { return names_; }
  Vector params(std::span<const double> u) const override { return t_(u); }
  Evaluation evaluate(std::span<const double> u, const WarmStartCache*) const override {
    Evaluation e;
    e.logl = l_(t_(u));
    if (std::isnan(e.logl)) e.logl = -std::numeric_limits<double>::infinity();
    return e;
  }

 private:
  std::size_t dim_;
  std::vector<std::string> names_;
  std::function<Vector(std::span<const double>)> t_;
  std::function<double(const Vector&)> l_;
};

}  // namespace

LikelihoodPtr make_likelihood(ModelPtr model, const LikelihoodSettings& s) {
  s.collapse.optimizer.validate();
  return std::make_shared<ModelLikelihood>(std::move(model), s);
}

LikelihoodPtr make_function_likelihood(std::size_t dim, std::vector<std::string> names,
                                       std::function<Vector(std::span<const double>)> transform,
                                       std::function<double(const Vector&)> logl) {
  if (dim == 0) throw ConfigError("likelihood dimension must be positive");
  return std::make_shared<FunctionLikelihood>(dim, std::move(names), std::move(transform),
                                              std::move(logl));
}

}  // namespace alcs
