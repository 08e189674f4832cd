#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "alcs/autodiff/diff_function.hpp"
#include "alcs/linalg/structured.hpp"
#include "alcs/optimizer/lbfgs.hpp"

namespace alcs {

class BoundModel;

// Evaluation flags, OR-ed together.
enum CollapseFlag : std::uint32_t {
  kNotConverged = 1u << 0,
  kIndefinite = 1u << 1,
  kWarmStartFallback = 1u << 2,
  kNuClampedLow = 1u << 3,
  kQuadratureRetry = 1u << 4,
  kJitter = 1u << 5,
  kLineSearchStalled = 1u << 6,
  kEvalFailed = 1u << 7,  // numerical error inside the evaluation; logL = -inf
};

enum class NuEstimator { TaylorMatched, AsWritten, Fixed };

struct StudentOptions {
  NuEstimator estimator = NuEstimator::TaylorMatched;
  double fixed_nu = 1e8;
  double nu_min = 4.01;
  double nu_max = 1e8;
};

struct CollapseOptions {
  OptimizerConfig optimizer;
  int newton_polish = 3;
  bool verify_structure = false;
};

struct CollapseResult {
  double loglik = 0.0;
  double log_joint = 0.0;  // log p(D, z_hat | theta)
  Vector z_hat;
  double half_logdet = 0.0;
  double grad_norm = 0.0;  // sqrt(g^T H^{-1} g) with the exact Hessian
  bool converged = false;
  double condition = 1.0;
  std::vector<double> nu;  // Student mode, one per whitened direction
  std::uint32_t flags = 0;
  std::shared_ptr<const WarmStartCache> cache;
};

// Whitened curvature directions of H = L L^T: d_j = L^{-T} e_j, unit length.
std::vector<Vector> whitened_directions(const StructuredCholesky& l);

// nu from second and fourth directional derivatives of log p along a direction.
// TaylorMatched: nu = 6 f''^2 / f'''' - 1 (matches the quartic term of the
// Student kernel). AsWritten: kurtosis route, nu = 4 + 6 / (3 f''''/f''^2 - 3).
// Clamped to [nu_min, nu_max]; f'''' <= 0 gives nu_max.
double estimate_nu(double f2, double f4, const StudentOptions& opt = {});

// log q(0) for the unit-curvature Student kernel with nu degrees of freedom.
double student_log_q0(double nu);

CollapseResult collapsed_loglik_gaussian(const BoundModel& m, const CollapseOptions& opt = {},
                                         const WarmStartCache* warm = nullptr);

CollapseResult collapsed_loglik_student(const BoundModel& m, const StudentOptions& st = {},
                                        const CollapseOptions& opt = {},
                                        const WarmStartCache* warm = nullptr);

// Lower-level entry: maximise log_joint (a function of n latents) and return
// the Laplace quantities. Used per block by the functions above.
CollapseResult collapse_problem(const ad::DiffFunction& log_joint, const LatentStructure& s,
                                const Vector& prior_mean, const StructuredMatrix& prior_precision,
                                const CollapseOptions& opt, const WarmStartCache* warm,
                                const StudentOptions* student);

}  // namespace alcs
