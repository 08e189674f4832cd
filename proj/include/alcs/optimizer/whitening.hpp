#pragma once

#include "alcs/linalg/structured.hpp"

namespace alcs {

// z~ = L^T (z - z0) with H0 = L L^T, so H0 becomes the identity in z~.
class WhiteningTransform {
 public:
  // Throws SingularWhitening if h0 is not positive definite.
  WhiteningTransform(Vector z0, const StructuredMatrix& h0);
  static WhiteningTransform identity(Vector z0);

  const Vector& origin() const { return z0_; }
  const StructuredCholesky& factor() const { return l_; }
  std::size_t dim() const { return static_cast<std::size_t>(z0_.size()); }

  Vector to_whitened(const Vector& z) const { return l_.upper_multiply(z - z0_); }
  Vector from_whitened(const Vector& zt) const { return z0_ + l_.upper_solve(zt); }
  // Gradient of f(z(z~)) with respect to z~.
  Vector gradient_to_whitened(const Vector& g) const { return l_.lower_solve(g); }
  // H = L H~ L^T
  Matrix hessian_to_original(const Matrix& ht) const;

 private:
  WhiteningTransform(Vector z0, StructuredCholesky l) : z0_(std::move(z0)), l_(std::move(l)) {}

  Vector z0_;
  StructuredCholesky l_;
};

}  // namespace alcs
