#include "alcs/models/quadrature.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "alcs/errors.hpp"

namespace alcs {

namespace {

constexpr double kTol = 1e-10;
// Kronrod-minus-Gauss estimates are pessimistic; only a bound this loose counts
// as non-convergence.
constexpr double kFail = 1e-8;

bool attempt(const std::function<double(double)>& log_f, double lo, double hi,
             unsigned depth, double& out) {
  double peak = -std::numeric_limits<double>::infinity();
  constexpr int kProbe = 64;
  const double step = (hi - lo) / kProbe;
  int arg = 0;
  for (int i = 0; i <= kProbe; ++i) {
    const double v = log_f(lo + step * i);
    if (v > peak) peak = v, arg = i;
  }
  if (!std::isfinite(peak)) return false;
  auto g = [&](double z) {
    const double v = std::exp(log_f(z) - peak);
    return std::isfinite(v) ? v : 0.0;
  };
  // A small panel around the probed maximum keeps narrow peaks from slipping
  // between the Kronrod nodes of a wide panel.
  const double cuts[4] = {lo, std::max(lo, lo + step * (arg - 1)),
                          std::min(hi, lo + step * (arg + 1)), hi};
  double val = 0.0, err = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    double e = 0.0;
    val += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, cuts[i], cuts[i + 1],
                                                                         depth, kTol, &e);
    err += e * 0.5 * (cuts[i + 1] - cuts[i]);  // boost reports the error on the [-1, 1] scale
  }
  if (!(val > 0.0) || !std::isfinite(val) || err > kFail * val) return false;
  out = std::log(val) + peak;
  return true;
}

}  // namespace

QuadratureResult log_quadrature(const std::function<double(double)>& log_f, double lo, double hi) {
  QuadratureResult r;
  if (attempt(log_f, lo, hi, 15, r.log_value)) return r;
  r.retried = true;
  const double mid = 0.5 * (lo + hi), half = hi - lo;
  if (attempt(log_f, mid - half, mid + half, 25, r.log_value)) return r;
  throw QuadratureError("adaptive quadrature did not reach tolerance on [" + std::to_string(lo) +
                        ", " + std::to_string(hi) + "]");
}

}  // namespace alcs
