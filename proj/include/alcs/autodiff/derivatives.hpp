#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "alcs/autodiff/diff_function.hpp"

namespace alcs::ad {

struct ValueGradient {
  double value = 0.0;
  Eigen::VectorXd grad;
};

enum class GradientMode { Auto, UnivariatePasses, Vector };

// n first-order passes (UnivariatePasses) or one dense-gradient pass (Vector).
// Auto picks by dimension; the two agree to rounding.
ValueGradient value_and_gradient(const DiffFunction& f, std::span<const double> x,
                                 GradientMode mode = GradientMode::Auto);

Eigen::VectorXd gradient(const DiffFunction& f, std::span<const double> x,
                         GradientMode mode = GradientMode::Auto);

// H v in one forward-over-forward pass.
Eigen::VectorXd hvp(const DiffFunction& f, std::span<const double> x,
                    std::span<const double> v);

// Full symmetric Hessian from one second-order dense pass.
Eigen::MatrixXd hessian_dense(const DiffFunction& f, std::span<const double> x);

// c_0..c_order of f(x + t v); v must have unit norm.
std::vector<double> directional_taylor(const DiffFunction& f, std::span<const double> x,
                                       std::span<const double> v, int order);

}  // namespace alcs::ad
