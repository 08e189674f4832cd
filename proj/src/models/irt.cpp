#include <cmath>
#include <random>

#include "internal.hpp"

namespace alcs {

namespace {

struct Response {
  std::size_t student, question;
  double correct;
};

struct IrtData {
  std::size_t students = 0, questions = 0;
  std::vector<Response> responses;
};

// z = (abilities a_1..a_S, difficulties b_1..b_Q), P(correct) = logistic(mu + a_i - b_j).
class IrtBound : public BoundModelBase<IrtBound> {
 public:
  IrtBound(std::shared_ptr<const IrtData> d, double mu)
      : BoundModelBase(LatentStructure::dense(d->students + d->questions)), d_(std::move(d)), mu_(mu) {}

  template <class T>
  T log_lik(std::span<const T> z) const {
    T acc(0.0);
    for (const Response& r : d_->responses) {
      const T eta = mu_ + z[r.student] - z[d_->students + r.question];
      acc += r.correct * eta - ad::log(1.0 + ad::exp(eta));
    }
    return acc;
  }
  template <class T>
  T log_prior(std::span<const T> z) const {
    T acc(0.0);
    for (std::size_t i = 0; i < z.size(); ++i) acc += ad::normal_logpdf(z[i], 0.0, 1.0);
    return acc;
  }

  StructuredMatrix prior_precision() const override { return StructuredMatrix::identity(structure_); }
  Vector prior_mean() const override { return Vector::Zero(static_cast<Eigen::Index>(structure_.dim)); }
  Vector latent_prior_transform(std::span<const double> u) const override {
    Vector z(static_cast<Eigen::Index>(structure_.dim));
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal_quantile(u[static_cast<std::size_t>(i)]);
    return z;
  }

 private:
  std::shared_ptr<const IrtData> d_;
  double mu_;
};

class Irt : public HierarchicalModel {
 public:
  Irt(IrtConfig cfg, std::shared_ptr<const IrtData> d) : cfg_(cfg), d_(std::move(d)) {}

  std::string name() const override { return "irt"; }
  std::size_t theta_dim() const override { return 1; }
  std::size_t latent_dim() const override { return d_->students + d_->questions; }
  std::vector<std::string> theta_names() const override { return {"mu_ability"}; }
  LatentStructure structure() const override { return LatentStructure::dense(latent_dim()); }

  Vector prior_transform(std::span<const double> u) const override {
    return Vector::Constant(1, 0.75 + normal_quantile(u[0]));
  }
  std::shared_ptr<const BoundModel> bind(std::span<const double> t) const override {
    return std::make_shared<IrtBound>(d_, t[0]);
  }

  json params() const override {
    return {{"students", cfg_.students}, {"questions", cfg_.questions}, {"fill", cfg_.fill},
            {"mu_true", cfg_.mu_true},   {"seed", cfg_.seed},          {"all_correct", cfg_.all_correct}};
  }
  SyntheticDataset dataset() const override {
    SyntheticDataset s;
    s.model = name();
    s.seed = cfg_.seed;
    json rows = json::array();
    for (const Response& r : d_->responses) rows.push_back({r.student, r.question, r.correct});
    s.observations = {{"students", d_->students}, {"questions", d_->questions}, {"responses", rows}};
    s.truth = {{"mu_ability", cfg_.mu_true}};
    return s;
  }

 private:
  IrtConfig cfg_;
  std::shared_ptr<const IrtData> d_;
};

}  // namespace

ModelPtr make_irt(const IrtConfig& cfg) {
  if (cfg.students < 1 || cfg.questions < 1) throw ConfigError("irt needs N_s, N_q >= 1");
  if (!(cfg.fill > 0.0 && cfg.fill <= 1.0)) throw ConfigError("irt fill must be in (0, 1]");
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> a(cfg.students), b(cfg.questions);
  for (auto& v : a) v = normal(rng);
  for (auto& v : b) v = normal(rng);
  auto d = std::make_shared<IrtData>();
  d->students = cfg.students;
  d->questions = cfg.questions;
  for (std::size_t i = 0; i < cfg.students; ++i) {
    for (std::size_t j = 0; j < cfg.questions; ++j) {
      const double observe = unif(rng), draw = unif(rng);
      if (observe >= cfg.fill) continue;
      const double p = 1.0 / (1.0 + std::exp(-(cfg.mu_true + a[i] - b[j])));
      d->responses.push_back({i, j, cfg.all_correct || draw < p ? 1.0 : 0.0});
    }
  }
  return std::make_shared<Irt>(cfg, d);
}

namespace detail {
ModelPtr irt_from(const IrtConfig& cfg, const SyntheticDataset& s) {
  auto d = std::make_shared<IrtData>();
  d->students = s.observations.at("students").get<std::size_t>();
  d->questions = s.observations.at("questions").get<std::size_t>();
  for (const auto& row : s.observations.at("responses")) {
    Response r{row.at(0).get<std::size_t>(), row.at(1).get<std::size_t>(), row.at(2).get<double>()};
    if (r.student >= d->students || r.question >= d->questions)
      throw ConfigError("irt dataset: response index out of range");
    d->responses.push_back(r);
  }
  IrtConfig c = cfg;
  c.students = d->students;
  c.questions = d->questions;
  c.seed = s.seed;
  return std::make_shared<Irt>(c, d);
}
}  // namespace detail

}  // namespace alcs
