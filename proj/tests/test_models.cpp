#include <cmath>
#include <functional>

#include <Eigen/Cholesky>

#include "alcs/autodiff/derivatives.hpp"
#include "alcs/errors.hpp"
#include "alcs/models/zoo.hpp"
#include "doctest.h"

using namespace alcs;

namespace {

constexpr double kL2P = 1.8378770664093454836;

double dense_gaussian_logpdf(const Vector& y, const Vector& m, const Matrix& c) {
  Eigen::LLT<Matrix> llt(c);
  const Vector r = y - m;
  const double ld = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * (static_cast<double>(y.size()) * kL2P + ld + r.dot(llt.solve(r)));
}

// Composite Simpson with n (even) panels, evaluated in log space around the max.
double log_simpson(const std::function<double(double)>& lf, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  double mx = -INFINITY;
  for (int i = 0; i <= n; ++i) mx = std::max(mx, v[static_cast<std::size_t>(i)] = lf(lo + i * h));
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * std::exp(v[static_cast<std::size_t>(i)] - mx);
  }
  return mx + std::log(s * h / 3.0);
}

double normal_lp(double x, double m, double s) {
  const double r = (x - m) / s;
  return -0.5 * (kL2P + r * r) - std::log(s);
}

}  // namespace

TEST_CASE("eight schools exact marginal is the product of N(mu, sigma^2 + tau^2)") {
  const double y[8] = {28, 8, -3, 7, -1, 1, 18, 12};
  const double s[8] = {15, 10, 16, 11, 9, 11, 10, 18};
  const auto m = make_eight_schools();
  for (double mu : {-2.0, 5.0}) {
    for (double lt : {-3.0, 1.0, 2.5}) {
      const double t[2] = {mu, lt};
      double ref = 0.0;
      for (int j = 0; j < 8; ++j) ref += normal_lp(y[j], mu, std::sqrt(s[j] * s[j] + std::exp(2 * lt)));
      CHECK(m->exact_marginal(t) == doctest::Approx(ref).epsilon(1e-13));
    }
  }
}

TEST_CASE("radon exact marginal matches a dense Gaussian per county") {
  const auto m = make_radon({6, 4, 42});
  const auto obs = m->dataset().observations;
  const auto ys = obs.at("y").get<std::vector<std::vector<double>>>();
  const auto xs = obs.at("x").get<std::vector<std::vector<double>>>();
  const double t[4] = {1.2, -0.6, -0.4, -0.2};
  const double sa2 = std::exp(2 * t[2]), sy2 = std::exp(2 * t[3]);
  double ref = 0.0;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    const auto n = static_cast<Eigen::Index>(ys[j].size());
    Vector y(n), mean(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = ys[j][static_cast<std::size_t>(i)];
      mean[i] = t[0] + t[1] * xs[j][static_cast<std::size_t>(i)];
    }
    const Matrix c = Matrix::Constant(n, n, sa2) + sy2 * Matrix::Identity(n, n);
    ref += dense_gaussian_logpdf(y, mean, c);
  }
  CHECK(m->exact_marginal(t) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("Kalman filter matches the dense Gaussian marginal of Brownian motion") {
  const auto m = make_brownian({20, 0.5, 42});
  const auto yv = m->dataset().observations.at("y").get<std::vector<double>>();
  const auto n = static_cast<Eigen::Index>(yv.size());
  const Vector y = Eigen::Map<const Vector>(yv.data(), n);
  for (double ls : {-1.5, -0.69, 0.4}) {
    const double s2 = std::exp(2 * ls);
    Matrix c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) c(i, j) = s2 * static_cast<double>(std::min(i, j) + 1);
    c += Matrix::Identity(n, n);
    const double t[1] = {ls};
    CHECK(m->exact_marginal(t) == doctest::Approx(dense_gaussian_logpdf(y, Vector::Zero(n), c)).epsilon(1e-11));
  }
}

TEST_CASE("student_hier quadrature matches fine Simpson integration") {
  const auto m = make_student_hier({5, 5.0, 0.0, 1.0, 42});
  const auto y = m->dataset().observations.at("y").get<std::vector<double>>();
  const double nu = 5.0;
  for (auto [mu, ls] : {std::pair{0.3, -0.2}, std::pair{-1.0, std::log(0.12)}, std::pair{2.0, 1.5}}) {
    const double s = std::exp(ls);
    const double c = std::lgamma(0.5 * (nu + 1)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * M_PI) - ls;
    double ref = 0.0;
    for (double yi : y) {
      auto lf = [&](double z) {
        const double r = (z - mu) / s;
        return normal_lp(z, yi, 1.0) + c - 0.5 * (nu + 1) * std::log1p(r * r / nu);
      };
      // heavy tails: wide range, fine grid
      ref += log_simpson(lf, std::min(mu, yi) - 400.0, std::max(mu, yi) + 400.0, 400000);
    }
    const double t[2] = {mu, ls};
    CHECK(m->exact_marginal(t) == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("tanh funnel quadrature matches Simpson and the theta -> -inf limit") {
  const auto m = make_tanh_funnel({4, 0.0, false, 42});
  const auto x = m->dataset().observations.at("x").get<std::vector<double>>();
  for (double th : {-2.0, 0.5, 3.0}) {
    const double sd = std::exp(0.5 * th);
    double ref = 0.0;
    for (double xi : x) {
      auto lf = [&](double z) { return normal_lp(std::tanh(z), xi, 1.0) + normal_lp(z, 0.0, sd); };
      ref += log_simpson(lf, -15 * sd, 15 * sd, 200000);
    }
    const double t[1] = {th};
    CHECK(m->exact_marginal(t) == doctest::Approx(ref).epsilon(1e-9));
  }
  // z collapses onto 0, so x ~ N(0, 1)
  double lim = 0.0;
  for (double xi : x) lim += normal_lp(xi, 0.0, 1.0);
  const double t[1] = {-30.0};
  CHECK(m->exact_marginal(t) == doctest::Approx(lim).epsilon(1e-9));
}

TEST_CASE("linear funnel exact marginal is N(0, 1 + e^theta)") {
  const auto m = make_tanh_funnel({6, 0.0, true, 7});
  const auto x = m->dataset().observations.at("x").get<std::vector<double>>();
  for (double th : {-1.0, 2.0}) {
    double ref = 0.0;
    for (double xi : x) ref += normal_lp(xi, 0.0, std::sqrt(1 + std::exp(th)));
    const double t[1] = {th};
    CHECK(m->exact_marginal(t) == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("log joint gradients match central differences on every model") {
  for (const auto& name : model_names()) {
    CAPTURE(name);
    json p = json::object();
    if (name == "radon") p = {{"counties", 5}};
    if (name == "sne") p = {{"objects", 6}};
    if (name == "lgcp") p = {{"grid", 4}};
    if (name == "irt") p = {{"students", 6}, {"questions", 4}};
    if (name == "sv") p = {{"steps", 12}};
    if (name == "brownian") p = {{"steps", 10}};
    if (name == "student_hier") p = {{"objects", 6}};
    const auto m = make_model(name, p);
    std::vector<double> u(m->theta_dim(), 0.4);
    const Vector th = m->prior_transform(u);
    const auto b = m->bind(std::span<const double>(th.data(), static_cast<std::size_t>(th.size())));
    const auto f = b->log_joint();
    std::vector<double> uz(m->latent_dim());
    for (std::size_t i = 0; i < uz.size(); ++i) uz[i] = 0.2 + 0.6 * std::fmod(0.37 * static_cast<double>(i + 1), 1.0);
    const Vector z = b->latent_prior_transform(uz);
    std::vector<double> zs(z.data(), z.data() + z.size());
    const auto g = ad::gradient(f, zs);
    double worst = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(zs[i]));
      auto zp = zs, zm = zs;
      zp[i] += h;
      zm[i] -= h;
      const double fd = (f(zp) - f(zm)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[static_cast<Eigen::Index>(i)]) / std::max(1.0, std::abs(fd)));
    }
    CHECK(worst < 1e-5);
    // log_joint is the sum of its pieces
    CHECK(f(zs) == doctest::Approx(b->log_likelihood(zs) + b->log_latent_prior(zs)).epsilon(1e-12));
  }
}

TEST_CASE("registry rejects unknown names and parameters") {
  CHECK_THROWS_AS(make_model("nope"), ConfigError);
  CHECK_THROWS_AS(make_model("radon", {{"countys", 3}}), ConfigError);
  CHECK_THROWS_AS(make_model("brownian", {{"steps", "ten"}}), ConfigError);
  CHECK_THROWS_AS(make_model("linear_funnel", {{"linear", false}}), ConfigError);
}

TEST_CASE("datasets survive a JSON round trip") {
  for (const auto& name : model_names()) {
    CAPTURE(name);
    json p = json::object();
    if (name == "radon") p = {{"counties", 4}};
    if (name == "sne") p = {{"objects", 4}};
    if (name == "lgcp") p = {{"grid", 3}};
    const auto d = generate_data(name, p, 9);
    const auto d2 = SyntheticDataset::from_json(json::parse(d.to_json().dump()));
    const auto a = make_model(name, p);
    const auto b = make_model(name, p, d2);
    CHECK(d2.observations == d.observations);
    if (a->exact_kind() == ExactKind::None) continue;
    std::vector<double> u(a->theta_dim(), 0.6);
    const Vector th = a->prior_transform(u);
    const std::span<const double> ts(th.data(), static_cast<std::size_t>(th.size()));
    CHECK(make_model(name, p, d)->exact_marginal(ts) == b->exact_marginal(ts));
  }
  SyntheticDataset d;
  d.model = "brownian";
  d.observations = {{"y", {1.0}}};
  CHECK_THROWS_AS(make_model("radon", {}, d), ConfigError);
}

TEST_CASE("non-positive scales raise DegeneratePrior") {
  const auto m = make_eight_schools();
  const double t[2] = {0.0, -800.0};
  CHECK_THROWS_AS(m->bind(t), DegeneratePrior);
}
