#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "alcs/collapse/collapse.hpp"
#include "alcs/errors.hpp"
#include "alcs/models/zoo.hpp"
#include "doctest.h"

using namespace alcs;

namespace {

constexpr double kTwoPiLog = 1.8378770664093454836;

// log t_nu(z; 0, 1)
ad::DiffFunction t_density(double nu) {
  const double c = std::lgamma(0.5 * (nu + 1)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * M_PI);
  return ad::DiffFunction(1, [nu, c](auto z) { return c - 0.5 * (nu + 1) * ad::log(1.0 + z[0] * z[0] / nu); });
}

CollapseResult collapse_1d(const ad::DiffFunction& f, const StudentOptions* st) {
  const auto s = LatentStructure::dense(1);
  return collapse_problem(f, s, Vector::Zero(1), StructuredMatrix::identity(s), CollapseOptions{}, nullptr, st);
}

}  // namespace

TEST_CASE("Gaussian collapse is exact on the linear-Gaussian model") {
  const auto m = make_linear_gaussian(2.0);
  for (double mu : {-3.0, 0.5, 2.0, 4.5}) {
    const double t[1] = {mu};
    const auto r = collapsed_loglik_gaussian(*m->bind(t));
    // y ~ N(m, 2)
    const double ref = -0.5 * (kTwoPiLog + std::log(2.0) + (2.0 - mu) * (2.0 - mu) / 2.0);
    CHECK(r.loglik == doctest::Approx(ref).epsilon(1e-12));
    CHECK(r.converged);
    CHECK(r.flags == 0);
    CHECK(r.z_hat[0] == doctest::Approx(0.5 * (mu + 2.0)).epsilon(1e-10));
  }
}

TEST_CASE("Taylor-matched nu recovers the Student-t degrees of freedom") {
  for (double nu : {5.0, 6.0, 10.0, 30.0}) {
    // log t_nu: f'' = -(nu+1)/nu, f'''' = 6 (nu+1)/nu^2
    const double f2 = -(nu + 1) / nu, f4 = 6 * (nu + 1) / (nu * nu);
    CHECK(estimate_nu(f2, f4) == doctest::Approx(nu).epsilon(1e-12));
    // scale invariance (Hessian matching rescales both by powers of the scale)
    CHECK(estimate_nu(4 * f2, 16 * f4) == doctest::Approx(nu).epsilon(1e-12));
  }
  StudentOptions opt;
  CHECK(estimate_nu(-1.0, -0.5, opt) == opt.nu_max);
  CHECK(estimate_nu(-1.0, 0.0, opt) == opt.nu_max);
  CHECK(estimate_nu(-1.0, 100.0, opt) == opt.nu_min);
}

TEST_CASE("student_log_q0 is the unit-curvature Student density at its mode") {
  for (double nu : {4.5, 7.0, 50.0}) {
    // curvature 1 at the mode needs scale^2 = (nu+1)/nu
    const double scale = std::sqrt((nu + 1) / nu);
    const boost::math::students_t_distribution<double> t(nu);
    CHECK(student_log_q0(nu) == doctest::Approx(std::log(boost::math::pdf(t, 0.0) / scale)).epsilon(1e-12));
  }
  CHECK(student_log_q0(1e12) == doctest::Approx(-0.5 * kTwoPiLog).epsilon(1e-9));
}

TEST_CASE("Student collapse is exact on a normalised Student-t integrand") {
  StudentOptions st;
  for (double nu : {5.0, 12.0}) {
    const auto f = t_density(nu);
    const auto rs = collapse_1d(f, &st);
    CHECK(std::abs(rs.loglik) < 1e-9);
    REQUIRE(rs.nu.size() == 1);
    CHECK(rs.nu[0] == doctest::Approx(nu).epsilon(1e-8));
    // Gaussian collapse underestimates: log pdf(0) + 1/2 log 2pi - 1/2 log((nu+1)/nu)
    const auto rg = collapse_1d(f, nullptr);
    const boost::math::students_t_distribution<double> t(nu);
    const double ref = std::log(boost::math::pdf(t, 0.0)) + 0.5 * kTwoPiLog - 0.5 * std::log((nu + 1) / nu);
    CHECK(rg.loglik == doctest::Approx(ref).epsilon(1e-10));
    CHECK(rg.loglik < 0.0);
  }
}

TEST_CASE("nu fixed at 1e8 reproduces the Gaussian collapse") {
  const auto m = make_eight_schools();
  const double t[2] = {4.0, 1.5};
  const auto b = m->bind(t);
  StudentOptions st;
  st.estimator = NuEstimator::Fixed;
  st.fixed_nu = 1e8;
  const auto g = collapsed_loglik_gaussian(*b);
  const auto s = collapsed_loglik_student(*b, st);
  CHECK(std::abs(g.loglik - s.loglik) < 1e-6);
}

TEST_CASE("warm starts do not change the converged answer") {
  const auto m = make_brownian({});
  const double t0[1] = {-0.5}, t1[1] = {-0.45};
  const auto a = collapsed_loglik_gaussian(*m->bind(t0));
  REQUIRE(a.cache);
  const auto cold = collapsed_loglik_gaussian(*m->bind(t1));
  const auto warm = collapsed_loglik_gaussian(*m->bind(t1), {}, a.cache.get());
  CHECK(warm.loglik == doctest::Approx(cold.loglik).epsilon(1e-11));
  CHECK((warm.flags & kWarmStartFallback) == 0);
}

TEST_CASE("collapse matches the Kalman filter on Brownian motion") {
  const auto m = make_brownian({});
  for (double ls : {-2.0, -0.7, 0.3}) {
    const double t[1] = {ls};
    const auto r = collapsed_loglik_gaussian(*m->bind(t));
    CHECK(std::abs(r.loglik - m->exact_marginal(t)) <= 1e-8 * (1 + std::abs(r.loglik)));
  }
}

TEST_CASE("whitened directions are unit and H-orthogonal") {
  StructuredMatrix h(LatentStructure::tridiagonal(4));
  h.diag << 3, 2, 4, 5;
  h.offdiag << 0.5, -0.3, 1.0;
  const auto l = StructuredCholesky::factor(h);
  const auto dirs = whitened_directions(l);
  REQUIRE(dirs.size() == 4);
  const Matrix hd = h.to_dense();
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(dirs[i].norm() == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(dirs[i].dot(hd * dirs[j])) < 1e-12);
  }
}
