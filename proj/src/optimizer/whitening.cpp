#include "alcs/optimizer/whitening.hpp"

#include "alcs/errors.hpp"

namespace alcs {

namespace {

StructuredCholesky factor_or_throw(const StructuredMatrix& h0) {
  try {
    return StructuredCholesky::factor(h0);
  } catch (const IndefiniteHessian& e) {
    throw SingularWhitening(std::string("whitening matrix not positive definite: ") + e.what());
  }
}

}  // namespace

WhiteningTransform::WhiteningTransform(Vector z0, const StructuredMatrix& h0)
    : z0_(std::move(z0)), l_(factor_or_throw(h0)) {
  if (static_cast<std::size_t>(z0_.size()) != h0.dim())
    throw SingularWhitening("whitening origin and matrix differ in dimension");
}

WhiteningTransform WhiteningTransform::identity(Vector z0) {
  const auto s = LatentStructure::diagonal(static_cast<std::size_t>(z0.size()));
  return {std::move(z0), StructuredCholesky::factor(StructuredMatrix::identity(s))};
}

Matrix WhiteningTransform::hessian_to_original(const Matrix& ht) const {
  const Matrix l = l_.lower_dense();
  return l * ht * l.transpose();
}

}  // namespace alcs
