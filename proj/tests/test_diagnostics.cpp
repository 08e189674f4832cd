#include <cmath>
#include <sstream>

#include "alcs/diagnostics/importance.hpp"
#include "alcs/diagnostics/recovery.hpp"
#include "alcs/errors.hpp"
#include "alcs/experiments/recipes.hpp"
#include "alcs/models/zoo.hpp"
#include "alcs/sampler/rng.hpp"
#include "doctest.h"

using namespace alcs;

TEST_CASE("ESS/K is exactly one when the latent conditional is Gaussian") {
  const auto m = make_linear_gaussian(2.0);
  for (double mu : {-1.0, 3.0}) {
    const auto r = is_ess(*m, Vector::Constant(1, mu), 500, Proposal::Gaussian, 4);
    CHECK(r.ess_frac == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(r.log_mean_weight) < 1e-10);
  }
}

TEST_CASE("IS-corrected likelihood approaches the quadrature value") {
  const auto m = make_student_hier({4, 5.0, 0.0, 1.0, 42});
  const Vector t = (Vector(2) << 0.2, std::log(0.3)).finished();
  const double exact = m->exact_marginal(std::span<const double>(t.data(), 2));
  const auto r = is_ess(*m, t, 20000, Proposal::Student, 8);
  const double corrected = r.loglik_alcs + r.log_mean_weight;
  CHECK(std::abs(corrected - exact) < 4 * r.log_mean_weight_sd + 1e-3);
  CHECK(is_corrected_loglik(*m, t, 20000, 8, Proposal::Student) == doctest::Approx(corrected).epsilon(1e-12));
  // the raw approximation is measurably off here
  CHECK(std::abs(r.loglik_alcs - exact) > 0.01);
}

TEST_CASE("ess_profile percentiles and CSV") {
  const auto m = make_eight_schools();
  std::vector<Vector> th;
  for (double lt : {-1.0, 0.0, 1.0, 2.0}) th.push_back((Vector(2) << 4.0, lt).finished());
  const auto rep = ess_profile(*m, th, 200, Proposal::Gaussian, 1);
  REQUIRE(rep.records.size() == 4);
  CHECK(rep.p50 == doctest::Approx(1.0).epsilon(1e-9));
  const auto csv = rep.to_csv(m->theta_names());
  std::istringstream in(csv);
  std::string line;
  int n = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++n;
  CHECK(n == 5);
  CHECK(rep.to_json(m->theta_names()).at("records").size() == 4);
}

TEST_CASE("percentile interpolates linearly") {
  CHECK(percentile({4, 1, 3, 2}, 0.5) == doctest::Approx(2.5));
  CHECK(percentile({1, 2, 3, 4}, 0.1) == doctest::Approx(1.3));
  CHECK(percentile({1, 2, 3, 4}, 1.0) == 4.0);
  CHECK(percentile({7}, 0.9) == 7.0);
}

TEST_CASE("systematic resampling hits integer expectations exactly") {
  auto rng = make_stream(1, 2);
  for (int rep = 0; rep < 20; ++rep) {
    const auto idx = systematic_resample({0.25, 0.75, 0.0}, 8, rng);
    REQUIRE(idx.size() == 8);
    int c[3] = {0, 0, 0};
    for (auto i : idx) ++c[i];
    CHECK(c[0] == 2);
    CHECK(c[1] == 6);
    CHECK(c[2] == 0);
  }
}

TEST_CASE("spearman uses average ranks for ties") {
  CHECK(spearman({1, 2, 2, 3}, {1, 3, 2, 4}) == doctest::Approx(4.5 / std::sqrt(22.5)).epsilon(1e-14));
  CHECK(spearman({1, 2, 3}, {30, 20, 10}) == doctest::Approx(-1.0));
}

TEST_CASE("recovered latents have the Laplace moments") {
  // single theta; z | m, y=2 is N((m + 2)/2, 1/2)
  const auto m = make_linear_gaussian(2.0);
  NsResult run;
  PosteriorSample a, b;
  a.params = Vector::Constant(1, 1.0);
  a.weight = 0.25;
  b.params = Vector::Constant(1, -3.0);
  b.weight = 0.75;
  run.posterior = {a, b};
  const std::size_t s = 4000;
  const auto js = recover_posterior(run, *m, s, 12);
  REQUIRE(js.size() == s);
  double sum[2] = {0, 0}, sum2[2] = {0, 0};
  std::size_t n[2] = {0, 0};
  for (const auto& j : js) {
    const std::size_t k = j.source;
    REQUIRE(k < 2);
    CHECK(j.theta[0] == run.posterior[k].params[0]);
    sum[k] += j.z[0];
    sum2[k] += j.z[0] * j.z[0];
    ++n[k];
  }
  CHECK(n[0] == 1000);
  CHECK(n[1] == 3000);
  const double mu[2] = {1.5, -0.5};
  for (int k = 0; k < 2; ++k) {
    const double nk = static_cast<double>(n[k]);
    const double mean = sum[k] / nk, var = sum2[k] / nk - mean * mean;
    CHECK(std::abs(mean - mu[k]) < 3 * std::sqrt(0.5 / nk));
    // var of the sample variance of a normal: 2 s^4 / n
    CHECK(std::abs(var - 0.5) < 3 * std::sqrt(2 * 0.25 / nk));
  }
}

TEST_CASE("unknown proposals are rejected") {
  CHECK_THROWS_AS(parse_proposal("cauchy"), ConfigError);
  CHECK(parse_proposal(to_string(Proposal::Student)) == Proposal::Student);
}
