#pragma once

namespace alcs::ad {

// psi^{(n)}(x) for n = 0..3. Poles (non-positive integers) give a non-finite value.
double polygamma(int n, double x);

inline double digamma(double x) { return polygamma(0, x); }

// lgamma((nu + 1) / 2) - lgamma(nu / 2), stable for very large nu.
double lgamma_half_step(double nu);

}  // namespace alcs::ad
