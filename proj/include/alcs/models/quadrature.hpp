#pragma once

#include <functional>

namespace alcs {

struct QuadratureResult {
  double log_value = 0.0;
  bool retried = false;
};

// log of the integral of exp(log_f) over [lo, hi] by adaptive Gauss-Kronrod
// (15 points), relative tolerance 1e-10 after rescaling by the integrand peak,
// with a separate panel around the probed peak. An error bound above 1e-8
// counts as non-convergence: the interval is doubled about its midpoint once,
// a second failure throws QuadratureError.
QuadratureResult log_quadrature(const std::function<double(double)>& log_f, double lo, double hi);

}  // namespace alcs
