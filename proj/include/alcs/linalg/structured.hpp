#pragma once

// Symmetric matrices with a declared sparsity pattern (dense, block-diagonal,
// tridiagonal, diagonal) and their Cholesky factors.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alcs/autodiff/diff_function.hpp"

namespace alcs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

enum class StructureKind { Dense, BlockDiagonal, Tridiagonal, Diagonal };

std::string to_string(StructureKind k);

struct LatentStructure {
  StructureKind kind = StructureKind::Dense;
  std::size_t dim = 0;
  std::vector<std::size_t> block_sizes;  // BlockDiagonal only

  static LatentStructure dense(std::size_t n) { return {StructureKind::Dense, n, {}}; }
  static LatentStructure tridiagonal(std::size_t n) {
    return {StructureKind::Tridiagonal, n, {}};
  }
  static LatentStructure diagonal(std::size_t n) { return {StructureKind::Diagonal, n, {}}; }
  static LatentStructure block_diagonal(std::vector<std::size_t> sizes);
  static LatentStructure uniform_blocks(std::size_t count, std::size_t size);

  std::vector<std::size_t> block_offsets() const;
  // Whether (i, j) may be non-zero.
  bool allows(std::size_t i, std::size_t j) const;
};

class StructuredMatrix {
 public:
  StructuredMatrix() = default;
  explicit StructuredMatrix(LatentStructure s);

  static StructuredMatrix from_dense(const Matrix& a, const LatentStructure& s);
  static StructuredMatrix identity(const LatentStructure& s, double scale = 1.0);

  const LatentStructure& structure() const { return s_; }
  std::size_t dim() const { return s_.dim; }

  Matrix to_dense() const;
  Vector multiply(const Vector& x) const;
  StructuredMatrix scaled(double a) const;

  // Storage, by kind.
  Matrix dense;                 // Dense
  std::vector<Matrix> blocks;   // BlockDiagonal
  Vector diag;                  // Tridiagonal, Diagonal
  Vector offdiag;               // Tridiagonal: (i+1, i)

 private:
  LatentStructure s_;
};

// A = L L^T with L lower triangular in the same pattern.
class StructuredCholesky {
 public:
  // Throws IndefiniteHessian with the first non-positive pivot.
  static StructuredCholesky factor(const StructuredMatrix& a);

  std::size_t dim() const { return s_.dim; }
  const LatentStructure& structure() const { return s_; }

  double half_logdet() const { return half_logdet_; }
  double min_pivot() const { return min_pivot_; }  // smallest diagonal entry of L
  double max_pivot() const { return max_pivot_; }
  double condition_estimate() const {
    return (max_pivot_ / min_pivot_) * (max_pivot_ / min_pivot_);
  }

  Vector lower_multiply(const Vector& x) const;         // L x
  Vector upper_multiply(const Vector& x) const;         // L^T x
  Vector lower_solve(const Vector& b) const;            // L^{-1} b
  Vector upper_solve(const Vector& b) const;            // L^{-T} b
  Vector solve(const Vector& b) const { return upper_solve(lower_solve(b)); }
  Matrix lower_dense() const;

 private:
  void finish_pivots(const Vector& d);

  LatentStructure s_;
  Eigen::LLT<Matrix> dense_;
  std::vector<Eigen::LLT<Matrix>> blocks_;
  Vector diag_;     // Tridiagonal, Diagonal: L_ii
  Vector sub_;      // Tridiagonal: L_{i+1,i}
  double half_logdet_ = 0.0;
  double min_pivot_ = 0.0, max_pivot_ = 0.0;
};

// 1/2 log det A; throws IndefiniteHessian.
double half_logdet(const StructuredMatrix& a);

// Three stride-3 probe vectors; H v_c recovers a tridiagonal H exactly.
std::vector<Vector> tridiag_coloring(std::size_t n);

// Hessian of f at z in the declared pattern. Tridiagonal uses three probe
// products, diagonal one, block-diagonal one per block-row index, dense a full
// second-order pass. With verify, a dense Hessian is also formed and any entry
// outside the pattern above 1e-10 relative raises StructureViolation.
StructuredMatrix latent_hessian(const ad::DiffFunction& f, std::span<const double> z,
                                const LatentStructure& s, bool verify = false);

}  // namespace alcs
