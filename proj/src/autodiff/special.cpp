#include "alcs/autodiff/special.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

namespace alcs::ad {

namespace {

// B_{2k} for k = 1..8
constexpr double kBernoulli[] = {1.0 / 6,   -1.0 / 30, 1.0 / 42,     -1.0 / 30,
                                 5.0 / 66,  -691.0 / 2730, 7.0 / 6, -3617.0 / 510};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Asymptotic expansion, accurate for x >= 10.
double polygamma_asymptotic(int n, double x) {
  if (n == 0) {
    double s = std::log(x) - 0.5 / x;
    const double x2 = x * x;
    double xp = x2;
    for (int k = 1; k <= 8; ++k) {
      s -= kBernoulli[k - 1] / (2.0 * k * xp);
      xp *= x2;
    }
    return s;
  }
  // (-1)^{n+1} [ (n-1)!/x^n + n!/(2 x^{n+1}) + sum_k B_2k (2k+n-1)!/((2k)! x^{2k+n}) ]
  double s = factorial(n - 1) / std::pow(x, n) + factorial(n) / (2.0 * std::pow(x, n + 1));
  for (int k = 1; k <= 8; ++k) {
    s += kBernoulli[k - 1] * factorial(2 * k + n - 1) / (factorial(2 * k) * std::pow(x, 2 * k + n));
  }
  return (n % 2 == 1) ? s : -s;
}

}  // namespace

double polygamma(int n, double x) {
  if (n < 0 || n > 3) return std::numeric_limits<double>::quiet_NaN();
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x <= 0.0 && x == std::floor(x)) return std::numeric_limits<double>::infinity();

  // psi^{(n)}(x) = psi^{(n)}(x + 1) - (-1)^n n! / x^{n+1}
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const double nf = factorial(n);
  double shift = 0.0;
  while (x < 10.0) {
    shift += sign * nf / std::pow(x, n + 1);
    x += 1.0;
  }
  return polygamma_asymptotic(n, x) - shift;
}

double lgamma_half_step(double nu) {
  if (!(nu > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  // tgamma_delta_ratio(z, d) = Gamma(z) / Gamma(z + d)
  return std::log(boost::math::tgamma_delta_ratio(0.5 * nu + 0.5, -0.5));
}

}  // namespace alcs::ad
