#include "alcs/linalg/structured.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alcs/autodiff/derivatives.hpp"
#include "alcs/errors.hpp"

namespace alcs {

using Index = Eigen::Index;

std::string to_string(StructureKind k) {
  switch (k) {
    case StructureKind::Dense: return "dense";
    case StructureKind::BlockDiagonal: return "block_diagonal";
    case StructureKind::Tridiagonal: return "tridiagonal";
    case StructureKind::Diagonal: return "diagonal";
  }
  return "unknown";
}

LatentStructure LatentStructure::block_diagonal(std::vector<std::size_t> sizes) {
  LatentStructure s{StructureKind::BlockDiagonal, 0, std::move(sizes)};
  for (std::size_t b : s.block_sizes) s.dim += b;
  return s;
}

LatentStructure LatentStructure::uniform_blocks(std::size_t count, std::size_t size) {
  return block_diagonal(std::vector<std::size_t>(count, size));
}

std::vector<std::size_t> LatentStructure::block_offsets() const {
  std::vector<std::size_t> off;
  off.reserve(block_sizes.size() + 1);
  std::size_t o = 0;
  for (std::size_t b : block_sizes) {
    off.push_back(o);
    o += b;
  }
  off.push_back(o);
  return off;
}

bool LatentStructure::allows(std::size_t i, std::size_t j) const {
  switch (kind) {
    case StructureKind::Dense: return true;
    case StructureKind::Diagonal: return i == j;
    case StructureKind::Tridiagonal: return (i > j ? i - j : j - i) <= 1;
    case StructureKind::BlockDiagonal: {
      std::size_t o = 0;
      for (std::size_t b : block_sizes) {
        const bool in_i = i >= o && i < o + b, in_j = j >= o && j < o + b;
        if (in_i || in_j) return in_i && in_j;
        o += b;
      }
      return false;
    }
  }
  return false;
}

StructuredMatrix::StructuredMatrix(LatentStructure s) : s_(std::move(s)) {
  const Index n = static_cast<Index>(s_.dim);
  switch (s_.kind) {
    case StructureKind::Dense: dense = Matrix::Zero(n, n); break;
    case StructureKind::BlockDiagonal:
      for (std::size_t b : s_.block_sizes)
        blocks.push_back(Matrix::Zero(static_cast<Index>(b), static_cast<Index>(b)));
      break;
    case StructureKind::Tridiagonal:
      diag = Vector::Zero(n);
      offdiag = Vector::Zero(std::max<Index>(n - 1, 0));
      break;
    case StructureKind::Diagonal: diag = Vector::Zero(n); break;
  }
}

StructuredMatrix StructuredMatrix::from_dense(const Matrix& a, const LatentStructure& s) {
  StructuredMatrix m(s);
  const Index n = static_cast<Index>(s.dim);
  switch (s.kind) {
    case StructureKind::Dense: m.dense = a; break;
    case StructureKind::BlockDiagonal: {
      const auto off = s.block_offsets();
      for (std::size_t b = 0; b < s.block_sizes.size(); ++b) {
        const Index o = static_cast<Index>(off[b]), sz = static_cast<Index>(s.block_sizes[b]);
        m.blocks[b] = a.block(o, o, sz, sz);
      }
      break;
    }
    case StructureKind::Tridiagonal:
      for (Index i = 0; i < n; ++i) m.diag[i] = a(i, i);
      for (Index i = 0; i + 1 < n; ++i) m.offdiag[i] = a(i + 1, i);
      break;
    case StructureKind::Diagonal:
      for (Index i = 0; i < n; ++i) m.diag[i] = a(i, i);
      break;
  }
  return m;
}

StructuredMatrix StructuredMatrix::identity(const LatentStructure& s, double scale) {
  const Index n = static_cast<Index>(s.dim);
  return from_dense(scale * Matrix::Identity(n, n), s);
}

Matrix StructuredMatrix::to_dense() const {
  const Index n = static_cast<Index>(s_.dim);
  Matrix a = Matrix::Zero(n, n);
  switch (s_.kind) {
    case StructureKind::Dense: return dense;
    case StructureKind::BlockDiagonal: {
      const auto off = s_.block_offsets();
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const Index o = static_cast<Index>(off[b]);
        a.block(o, o, blocks[b].rows(), blocks[b].cols()) = blocks[b];
      }
      break;
    }
    case StructureKind::Tridiagonal:
      for (Index i = 0; i < n; ++i) a(i, i) = diag[i];
      for (Index i = 0; i + 1 < n; ++i) a(i + 1, i) = a(i, i + 1) = offdiag[i];
      break;
    case StructureKind::Diagonal:
      for (Index i = 0; i < n; ++i) a(i, i) = diag[i];
      break;
  }
  return a;
}

Vector StructuredMatrix::multiply(const Vector& x) const {
  const Index n = static_cast<Index>(s_.dim);
  switch (s_.kind) {
    case StructureKind::Dense: return dense * x;
    case StructureKind::BlockDiagonal: {
      Vector y(n);
      const auto off = s_.block_offsets();
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const Index o = static_cast<Index>(off[b]), sz = blocks[b].rows();
        y.segment(o, sz) = blocks[b] * x.segment(o, sz);
      }
      return y;
    }
    case StructureKind::Tridiagonal: {
      Vector y = diag.cwiseProduct(x);
      for (Index i = 0; i + 1 < n; ++i) {
        y[i] += offdiag[i] * x[i + 1];
        y[i + 1] += offdiag[i] * x[i];
      }
      return y;
    }
    case StructureKind::Diagonal: return diag.cwiseProduct(x);
  }
  return x;
}

StructuredMatrix StructuredMatrix::scaled(double a) const {
  StructuredMatrix m = *this;
  m.dense *= a;
  for (auto& b : m.blocks) b *= a;
  m.diag *= a;
  m.offdiag *= a;
  return m;
}

namespace {

// Plain right-looking Cholesky, only used to report the failing pivot.
[[noreturn]] void report_indefinite(const Matrix& a, Index offset) {
  Matrix l = a;
  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {
    double d = l(k, k);
    for (Index p = 0; p < k; ++p) d -= l(k, p) * l(k, p);
    if (!(d > 0.0)) throw IndefiniteHessian(d, static_cast<std::size_t>(offset + k));
    l(k, k) = std::sqrt(d);
    for (Index i = k + 1; i < n; ++i) {
      double s = l(i, k);
      for (Index p = 0; p < k; ++p) s -= l(i, p) * l(k, p);
      l(i, k) = s / l(k, k);
    }
  }
  throw IndefiniteHessian(std::numeric_limits<double>::quiet_NaN(),
                          static_cast<std::size_t>(offset));
}

Eigen::LLT<Matrix> checked_llt(const Matrix& a, Index offset) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success || !llt.matrixLLT().diagonal().allFinite() ||
      (a.rows() > 0 && !(llt.matrixLLT().diagonal().minCoeff() > 0.0)))
    report_indefinite(a, offset);
  return llt;
}

}  // namespace

void StructuredCholesky::finish_pivots(const Vector& d) {
  if (d.size() == 0) {
    half_logdet_ = 0.0;
    min_pivot_ = max_pivot_ = 1.0;
    return;
  }
  half_logdet_ = d.array().log().sum();
  min_pivot_ = d.minCoeff();
  max_pivot_ = d.maxCoeff();
}

StructuredCholesky StructuredCholesky::factor(const StructuredMatrix& a) {
  StructuredCholesky c;
  c.s_ = a.structure();
  const Index n = static_cast<Index>(c.s_.dim);
  Vector pivots(n);
  switch (c.s_.kind) {
    case StructureKind::Dense:
      c.dense_ = checked_llt(a.dense, 0);
      pivots = c.dense_.matrixLLT().diagonal();
      break;
    case StructureKind::BlockDiagonal: {
      const auto off = c.s_.block_offsets();
      c.blocks_.reserve(a.blocks.size());
      for (std::size_t b = 0; b < a.blocks.size(); ++b) {
        const Index o = static_cast<Index>(off[b]);
        c.blocks_.push_back(checked_llt(a.blocks[b], o));
        pivots.segment(o, a.blocks[b].rows()) = c.blocks_.back().matrixLLT().diagonal();
      }
      break;
    }
    case StructureKind::Tridiagonal: {
      c.diag_.resize(n);
      c.sub_.resize(std::max<Index>(n - 1, 0));
      for (Index i = 0; i < n; ++i) {
        double d = a.diag[i];
        if (i > 0) {
          c.sub_[i - 1] = a.offdiag[i - 1] / c.diag_[i - 1];
          d -= c.sub_[i - 1] * c.sub_[i - 1];
        }
        if (!(d > 0.0) || !std::isfinite(d)) throw IndefiniteHessian(d, static_cast<std::size_t>(i));
        c.diag_[i] = std::sqrt(d);
      }
      pivots = c.diag_;
      break;
    }
    case StructureKind::Diagonal:
      c.diag_.resize(n);
      for (Index i = 0; i < n; ++i) {
        if (!(a.diag[i] > 0.0) || !std::isfinite(a.diag[i]))
          throw IndefiniteHessian(a.diag[i], static_cast<std::size_t>(i));
        c.diag_[i] = std::sqrt(a.diag[i]);
      }
      pivots = c.diag_;
      break;
  }
  c.finish_pivots(pivots);
  return c;
}

Vector StructuredCholesky::lower_multiply(const Vector& x) const {
  const Index n = static_cast<Index>(s_.dim);
  switch (s_.kind) {
    case StructureKind::Dense: return dense_.matrixL() * x;
    case StructureKind::BlockDiagonal: {
      Vector y(n);
      const auto off = s_.block_offsets();
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const Index o = static_cast<Index>(off[b]), sz = blocks_[b].rows();
        y.segment(o, sz) = blocks_[b].matrixL() * x.segment(o, sz);
      }
      return y;
    }
    case StructureKind::Tridiagonal: {
      Vector y = diag_.cwiseProduct(x);
      for (Index i = 1; i < n; ++i) y[i] += sub_[i - 1] * x[i - 1];
      return y;
    }
    case StructureKind::Diagonal: return diag_.cwiseProduct(x);
  }
  return x;
}

Vector StructuredCholesky::upper_multiply(const Vector& x) const {
  const Index n = static_cast<Index>(s_.dim);
  switch (s_.kind) {
    case StructureKind::Dense: return dense_.matrixU() * x;
    case StructureKind::BlockDiagonal: {
      Vector y(n);
      const auto off = s_.block_offsets();
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const Index o = static_cast<Index>(off[b]), sz = blocks_[b].rows();
        y.segment(o, sz) = blocks_[b].matrixU() * x.segment(o, sz);
      }
      return y;
    }
    case StructureKind::Tridiagonal: {
      Vector y = diag_.cwiseProduct(x);
      for (Index i = 0; i + 1 < n; ++i) y[i] += sub_[i] * x[i + 1];
      return y;
    }
    case StructureKind::Diagonal: return diag_.cwiseProduct(x);
  }
  return x;
}

Vector StructuredCholesky::lower_solve(const Vector& b) const {
  const Index n = static_cast<Index>(s_.dim);
  switch (s_.kind) {
    case StructureKind::Dense: return dense_.matrixL().solve(b);
    case StructureKind::BlockDiagonal: {
      Vector y(n);
      const auto off = s_.block_offsets();
      for (std::size_t k = 0; k < blocks_.size(); ++k) {
        const Index o = static_cast<Index>(off[k]), sz = blocks_[k].rows();
        y.segment(o, sz) = blocks_[k].matrixL().solve(b.segment(o, sz));
      }
      return y;
    }
    case StructureKind::Tridiagonal: {
      Vector y(n);
      for (Index i = 0; i < n; ++i) {
        double s = b[i];
        if (i > 0) s -= sub_[i - 1] * y[i - 1];
        y[i] = s / diag_[i];
      }
      return y;
    }
    case StructureKind::Diagonal: return b.cwiseQuotient(diag_);
  }
  return b;
}

Vector StructuredCholesky::upper_solve(const Vector& b) const {
  const Index n = static_cast<Index>(s_.dim);
  switch (s_.kind) {
    case StructureKind::Dense: return dense_.matrixU().solve(b);
    case StructureKind::BlockDiagonal: {
      Vector y(n);
      const auto off = s_.block_offsets();
      for (std::size_t k = 0; k < blocks_.size(); ++k) {
        const Index o = static_cast<Index>(off[k]), sz = blocks_[k].rows();
        y.segment(o, sz) = blocks_[k].matrixU().solve(b.segment(o, sz));
      }
      return y;
    }
    case StructureKind::Tridiagonal: {
      Vector y(n);
      for (Index i = n - 1; i >= 0; --i) {
        double s = b[i];
        if (i + 1 < n) s -= sub_[i] * y[i + 1];
        y[i] = s / diag_[i];
      }
      return y;
    }
    case StructureKind::Diagonal: return b.cwiseQuotient(diag_);
  }
  return b;
}

Matrix StructuredCholesky::lower_dense() const {
  const Index n = static_cast<Index>(s_.dim);
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n);
    e[j] = 1.0;
    l.col(j) = lower_multiply(e);
  }
  return l;
}

double half_logdet(const StructuredMatrix& a) { return StructuredCholesky::factor(a).half_logdet(); }

std::vector<Vector> tridiag_coloring(std::size_t n) {
  const std::size_t colors = std::min<std::size_t>(3, n);
  std::vector<Vector> v(colors, Vector::Zero(static_cast<Index>(n)));
  for (std::size_t i = 0; i < n; ++i) v[i % 3][static_cast<Index>(i)] = 1.0;
  return v;
}

StructuredMatrix latent_hessian(const ad::DiffFunction& f, std::span<const double> z,
                                const LatentStructure& s, bool verify) {
  const std::size_t n = s.dim;
  StructuredMatrix h(s);
  switch (s.kind) {
    case StructureKind::Dense: h.dense = ad::hessian_dense(f, z); break;
    case StructureKind::Diagonal: {
      const Vector ones = Vector::Ones(static_cast<Index>(n));
      h.diag = ad::hvp(f, z, as_span(ones));
      break;
    }
    case StructureKind::Tridiagonal: {
      const auto probes = tridiag_coloring(n);
      std::vector<Vector> hv;
      for (const auto& p : probes) hv.push_back(ad::hvp(f, z, as_span(p)));
      for (std::size_t i = 0; i < n; ++i) {
        const Vector& col = hv[i % 3];
        h.diag[static_cast<Index>(i)] = col[static_cast<Index>(i)];
        if (i + 1 < n) h.offdiag[static_cast<Index>(i)] = col[static_cast<Index>(i + 1)];
      }
      break;
    }
    case StructureKind::BlockDiagonal: {
      const auto off = s.block_offsets();
      std::size_t bmax = 0;
      for (std::size_t b : s.block_sizes) bmax = std::max(bmax, b);
      for (std::size_t c = 0; c < bmax; ++c) {
        Vector p = Vector::Zero(static_cast<Index>(n));
        for (std::size_t b = 0; b < s.block_sizes.size(); ++b)
          if (c < s.block_sizes[b]) p[static_cast<Index>(off[b] + c)] = 1.0;
        const Vector hv = ad::hvp(f, z, as_span(p));
        for (std::size_t b = 0; b < s.block_sizes.size(); ++b) {
          if (c >= s.block_sizes[b]) continue;
          for (std::size_t r = 0; r < s.block_sizes[b]; ++r)
            h.blocks[b](static_cast<Index>(r), static_cast<Index>(c)) =
                hv[static_cast<Index>(off[b] + r)];
        }
      }
      for (auto& b : h.blocks) b = 0.5 * (b + b.transpose()).eval();
      break;
    }
  }
  if (verify && s.kind != StructureKind::Dense) {
    const Matrix full = ad::hessian_dense(f, z);
    const double scale = std::max(1.0, full.cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        const double v = full(static_cast<Index>(i), static_cast<Index>(j));
        if (!s.allows(i, j) && std::abs(v) > 1e-10 * scale) throw StructureViolation(i, j, v);
      }
  }
  return h;
}

}  // namespace alcs
