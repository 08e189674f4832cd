#pragma once

#include "alcs/autodiff/diff_function.hpp"
#include "alcs/errors.hpp"
#include "alcs/optimizer/whitening.hpp"

namespace alcs {

struct OptimizerConfig {
  int memory = 10;
  int max_iterations = 200;
  double grad_tol = 1e-8;  // on sqrt(g^T H~^{-1} g)
  double c1 = 1e-4;
  double shrink = 0.5;
  int max_trials = 30;

  void validate() const;
};

struct OptResult {
  Vector z;
  double value = 0.0;
  double grad_norm = 0.0;  // preconditioned, quasi-Newton curvature
  int iterations = 0;
  bool converged = false;
};

class LineSearchStalled : public NumericalError {
 public:
  explicit LineSearchStalled(OptResult best)
      : NumericalError("line search stalled"), best_(std::move(best)) {}
  const OptResult& best() const { return best_; }

 private:
  OptResult best_;
};

// Converged (z_hat, H) from an earlier optimisation.
struct WarmStartCache {
  Vector z_hat;
  StructuredMatrix hessian;
};

struct WarmStart {
  Vector x0;
  WhiteningTransform whitening;
};

// Start at the cached MAP, whitened by the cached Hessian.
WarmStart warm_start(const WarmStartCache& cache);

// Minimise f starting from z0, iterating in the whitened coordinates of w.
// Throws NonFiniteObjective if f(z0) is not finite, LineSearchStalled when no
// step satisfies the Armijo condition.
OptResult lbfgs_minimize(const ad::DiffFunction& f, const Vector& z0,
                         const WhiteningTransform& w, const OptimizerConfig& cfg = {});

}  // namespace alcs
