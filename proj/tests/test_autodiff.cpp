#include <cmath>
#include <vector>

#include <boost/math/special_functions/polygamma.hpp>

#include "alcs/autodiff/derivatives.hpp"
#include "alcs/autodiff/ops.hpp"
#include "alcs/autodiff/special.hpp"
#include "alcs/errors.hpp"
#include "doctest.h"

using namespace alcs;
using alcs::ad::DiffFunction;

namespace {

// f = x0^2 x1 + exp(x1) + log(x2) + tanh(x0) + sqrt(x2) x0
DiffFunction mixed() {
  return DiffFunction(3, [](auto x) {
    return x[0] * x[0] * x[1] + ad::exp(x[1]) + ad::log(x[2]) + ad::tanh(x[0]) + ad::sqrt(x[2]) * x[0];
  });
}

Eigen::Vector3d mixed_grad(const double* x) {
  const double th = std::tanh(x[0]);
  return {2 * x[0] * x[1] + (1 - th * th) + std::sqrt(x[2]), x[0] * x[0] + std::exp(x[1]),
          1 / x[2] + x[0] / (2 * std::sqrt(x[2]))};
}

Eigen::Matrix3d mixed_hess(const double* x) {
  const double th = std::tanh(x[0]);
  Eigen::Matrix3d h;
  h << 2 * x[1] - 2 * th * (1 - th * th), 2 * x[0], 1 / (2 * std::sqrt(x[2])),  //
      2 * x[0], std::exp(x[1]), 0.0,                                             //
      1 / (2 * std::sqrt(x[2])), 0.0, -1 / (x[2] * x[2]) - x[0] / (4 * std::pow(x[2], 1.5));
  return h;
}

// degree 4 in x
DiffFunction quartic() {
  return DiffFunction(3, [](auto x) {
    return x[0] * x[0] * x[0] * x[0] - 2.0 * x[0] * x[0] * x[1] + 3.0 * x[1] * x[1] * x[1] * x[2] + x[2] - 5.0;
  });
}

// Coefficients of t -> f(x + t v) by exact interpolation at t = -2..2.
std::vector<long double> interp_coeffs(const DiffFunction& f, const double* x, const double* v) {
  long double a[5][6];
  for (int r = 0; r < 5; ++r) {
    const long double t = r - 2;
    double p[3];
    for (int i = 0; i < 3; ++i) p[i] = x[i] + static_cast<double>(t) * v[i];
    long double tp = 1;
    for (int c = 0; c < 5; ++c, tp *= t) a[r][c] = tp;
    a[r][5] = f(std::span<const double>(p, 3));
  }
  for (int c = 0; c < 5; ++c) {
    int piv = c;
    for (int r = c + 1; r < 5; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    for (int k = 0; k < 6; ++k) std::swap(a[c][k], a[piv][k]);
    for (int r = 0; r < 5; ++r) {
      if (r == c) continue;
      const long double m = a[r][c] / a[c][c];
      for (int k = 0; k < 6; ++k) a[r][k] -= m * a[c][k];
    }
  }
  std::vector<long double> out(5);
  for (int c = 0; c < 5; ++c) out[static_cast<std::size_t>(c)] = a[c][5] / a[c][c];
  return out;
}

}  // namespace

TEST_CASE("gradient and Hessian match hand-derived formulas") {
  const double x[3] = {0.3, -0.7, 1.9};
  const auto f = mixed();
  const auto g = ad::gradient(f, x);
  const auto h = ad::hessian_dense(f, x);
  const auto gref = mixed_grad(x);
  const auto href = mixed_hess(x);
  for (int i = 0; i < 3; ++i) {
    CHECK(g[i] == doctest::Approx(gref[i]).epsilon(1e-13));
    for (int j = 0; j < 3; ++j) CHECK(h(i, j) == doctest::Approx(href(i, j)).epsilon(1e-12));
  }
}

TEST_CASE("gradient modes agree") {
  const double x[3] = {-1.1, 0.4, 0.6};
  const auto f = mixed();
  const auto a = ad::value_and_gradient(f, x, ad::GradientMode::UnivariatePasses);
  const auto b = ad::value_and_gradient(f, x, ad::GradientMode::Vector);
  CHECK(a.value == b.value);
  CHECK((a.grad - b.grad).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hvp equals H v") {
  const double x[3] = {0.8, 0.1, 2.5};
  const double v[3] = {0.3, -1.2, 0.5};
  const auto hv = ad::hvp(mixed(), x, v);
  const Eigen::Vector3d ref = mixed_hess(x) * Eigen::Vector3d(v[0], v[1], v[2]);
  CHECK((hv - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("directional_taylor is exact on a quartic") {
  const double x[3] = {0.7, -1.3, 0.4};
  double v[3] = {0.2, 0.9, -0.4};
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  for (auto& c : v) c /= n;
  const auto f = quartic();
  const auto c = ad::directional_taylor(f, x, v, 4);
  const auto ref = interp_coeffs(f, x, v);
  REQUIRE(c.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    const double r = static_cast<double>(ref[k]);
    CHECK(std::abs(c[k] - r) <= 1e-12 * std::max(1.0, std::abs(r)));
  }
}

TEST_CASE("directional_taylor rejects a non-unit direction") {
  const double x[3] = {0, 0, 1};
  const double v[3] = {1, 1, 0};
  CHECK_THROWS_AS(ad::directional_taylor(quartic(), x, v, 4), InvalidDirection);
}

TEST_CASE("lgamma jets carry polygamma coefficients") {
  const double x0 = 3.7;
  const auto j = ad::lgamma(ad::Jet<3>::variable(x0));
  CHECK(j[0] == doctest::Approx(std::lgamma(x0)).epsilon(1e-14));
  CHECK(j[1] == doctest::Approx(boost::math::polygamma(0, x0)).epsilon(1e-12));
  CHECK(j[2] == doctest::Approx(boost::math::polygamma(1, x0) / 2).epsilon(1e-12));
  CHECK(j[3] == doctest::Approx(boost::math::polygamma(2, x0) / 6).epsilon(1e-11));
  CHECK(ad::polygamma(3, 0.8) == doctest::Approx(boost::math::polygamma(3, 0.8)).epsilon(1e-11));
}

TEST_CASE("lgamma_half_step stays accurate for huge nu") {
  for (double nu : {4.5, 30.0, 1e4}) {
    CHECK(ad::lgamma_half_step(nu) ==
          doctest::Approx(std::lgamma(0.5 * (nu + 1)) - std::lgamma(0.5 * nu)).epsilon(1e-10));
  }
  // asymptotically 0.5 log(nu / 2)
  CHECK(ad::lgamma_half_step(1e12) == doctest::Approx(0.5 * std::log(0.5e12)).epsilon(1e-12));
}

TEST_CASE("non-finite derivatives are reported with the input index") {
  // finite value, overflowing derivative in x1 only
  const DiffFunction f(2, [](auto x) { return x[0] + ad::exp(705.0 * x[1]); });
  const double bad[2] = {1.0, 1.0};
  try {
    ad::gradient(f, bad);
    FAIL("expected NonFiniteDerivative");
  } catch (const NonFiniteDerivative& e) {
    CHECK(e.index() == 1);
  }
  const DiffFunction g(2, [](auto x) { return x[0] + ad::log(x[1]); });
  const double pole[2] = {1.0, 0.0};
  CHECK_THROWS_AS(ad::gradient(g, pole), NonFiniteDerivative);
}
