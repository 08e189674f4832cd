#pragma once

// Dense-gradient forward mode: value, gradient and (Order == 2) packed lower
// Hessian carried together, so one pass yields all n second derivatives.
// Empty storage means "identically zero", which keeps constants cheap.

#include <cmath>
#include <cstddef>
#include <vector>

#include "alcs/autodiff/jet.hpp"

namespace alcs::ad {

inline std::size_t packed_index(std::size_t i, std::size_t j) {
  return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
}

template <int Order>
class MultiJet {
  static_assert(Order == 1 || Order == 2, "MultiJet supports orders 1 and 2");

 public:
  static constexpr int order = Order;

  MultiJet() = default;
  MultiJet(double v) : v_(v) {}  // NOLINT

  static MultiJet variable(double x, std::size_t i, std::size_t n) {
    MultiJet m(x);
    m.g_.assign(n, 0.0);
    m.g_[i] = 1.0;
    return m;
  }

  double value() const { return v_; }
  const std::vector<double>& grad() const { return g_; }
  const std::vector<double>& hess_packed() const { return h_; }
  double grad(std::size_t i) const { return g_.empty() ? 0.0 : g_[i]; }
  double hess(std::size_t i, std::size_t j) const {
    return h_.empty() ? 0.0 : h_[packed_index(i, j)];
  }

  MultiJet& operator+=(const MultiJet& b) {
    v_ += b.v_;
    axpy(g_, 1.0, b.g_);
    if constexpr (Order == 2) axpy(h_, 1.0, b.h_);
    return *this;
  }
  MultiJet& operator-=(const MultiJet& b) {
    v_ -= b.v_;
    axpy(g_, -1.0, b.g_);
    if constexpr (Order == 2) axpy(h_, -1.0, b.h_);
    return *this;
  }
  MultiJet& operator+=(double b) {
    v_ += b;
    return *this;
  }
  MultiJet& operator-=(double b) {
    v_ -= b;
    return *this;
  }
  MultiJet& operator*=(double b) {
    v_ *= b;
    for (auto& x : g_) x *= b;
    for (auto& x : h_) x *= b;
    return *this;
  }
  MultiJet& operator/=(double b) { return *this *= 1.0 / b; }
  MultiJet& operator*=(const MultiJet& b) { return *this = *this * b; }
  MultiJet& operator/=(const MultiJet& b) { return *this = *this / b; }

  // this += alpha * b
  MultiJet& add_scaled(double alpha, const MultiJet& b) {
    v_ += alpha * b.v_;
    axpy(g_, alpha, b.g_);
    if constexpr (Order == 2) axpy(h_, alpha, b.h_);
    return *this;
  }

  friend MultiJet operator-(MultiJet a) { return a *= -1.0; }
  friend MultiJet operator+(MultiJet a, const MultiJet& b) { return a += b; }
  friend MultiJet operator-(MultiJet a, const MultiJet& b) { return a -= b; }
  friend MultiJet operator+(MultiJet a, double b) { return a += b; }
  friend MultiJet operator+(double a, MultiJet b) { return b += a; }
  friend MultiJet operator-(MultiJet a, double b) { return a -= b; }
  friend MultiJet operator-(double a, MultiJet b) {
    b *= -1.0;
    return b += a;
  }
  friend MultiJet operator*(MultiJet a, double b) { return a *= b; }
  friend MultiJet operator*(double a, MultiJet b) { return b *= a; }
  friend MultiJet operator/(MultiJet a, double b) { return a /= b; }

  friend MultiJet operator*(const MultiJet& a, const MultiJet& b) {
    MultiJet r(a.v_ * b.v_);
    r.g_ = a.g_;
    for (auto& x : r.g_) x *= b.v_;
    axpy(r.g_, a.v_, b.g_);
    if constexpr (Order == 2) {
      r.h_ = a.h_;
      for (auto& x : r.h_) x *= b.v_;
      axpy(r.h_, a.v_, b.h_);
      sym_outer(r.h_, 1.0, a.g_, b.g_);
    }
    return r;
  }

  friend MultiJet operator/(const MultiJet& a, const MultiJet& b) {
    return a * apply(b, reciprocal_jet(b.v_));
  }
  friend MultiJet operator/(double a, const MultiJet& b) {
    return apply(b, reciprocal_jet(b.v_)) * a;
  }

  // f(a) given the Taylor coefficients (f, f', f''/2) at a.value().
  static MultiJet apply(const MultiJet& a, const Jet<2>& f) {
    for (int k = 0; k <= 2; ++k)
      if (!std::isfinite(f[k])) throw NonFiniteDerivative();
    MultiJet r(f[0]);
    r.g_ = a.g_;
    for (auto& x : r.g_) x *= f[1];
    if constexpr (Order == 2) {
      r.h_ = a.h_;
      for (auto& x : r.h_) x *= f[1];
      sym_outer(r.h_, f[2], a.g_, a.g_);
    }
    return r;
  }

 private:
  static Jet<2> reciprocal_jet(double b) { return 1.0 / Jet<2>::variable(b); }

  static void axpy(std::vector<double>& y, double alpha, const std::vector<double>& x) {
    if (x.empty() || alpha == 0.0) return;
    if (y.empty()) {
      y.resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = alpha * x[i];
      return;
    }
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
  }

  // h += alpha (a b^T + b a^T), packed lower.
  static void sym_outer(std::vector<double>& h, double alpha, const std::vector<double>& a,
                        const std::vector<double>& b) {
    if (a.empty() || b.empty() || alpha == 0.0) return;
    const std::size_t n = a.size();
    if (h.empty()) h.assign(n * (n + 1) / 2, 0.0);
    thread_local std::vector<std::size_t> nz;
    nz.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (a[i] != 0.0 || b[i] != 0.0) nz.push_back(i);
    for (std::size_t ii = 0; ii < nz.size(); ++ii) {
      const std::size_t i = nz[ii];
      const std::size_t row = i * (i + 1) / 2;
      const double ai = alpha * a[i], bi = alpha * b[i];
      for (std::size_t jj = 0; jj <= ii; ++jj) {
        const std::size_t j = nz[jj];
        h[row + j] += ai * b[j] + bi * a[j];
      }
    }
  }

  double v_ = 0.0;
  std::vector<double> g_;
  std::vector<double> h_;
};

// The Hessian block above stores d^2 f / dx_i dx_j. For a product,
// H(ab) = a H(b) + b H(a) + g_a g_b^T + g_b g_a^T, so sym_outer(alpha = 1).
// For a unary map, H(f(a)) = f' H(a) + f'' g g^T = f' H(a) + 2 c2 g g^T,
// and sym_outer(a, a) with alpha = c2 adds exactly 2 c2 g g^T.

template <int O>
MultiJet<O> exp(const MultiJet<O>& a) {
  return MultiJet<O>::apply(a, exp(Jet<2>::variable(a.value())));
}
template <int O>
MultiJet<O> log(const MultiJet<O>& a) {
  return MultiJet<O>::apply(a, log(Jet<2>::variable(a.value())));
}
template <int O>
MultiJet<O> sqrt(const MultiJet<O>& a) {
  return MultiJet<O>::apply(a, sqrt(Jet<2>::variable(a.value())));
}
template <int O>
MultiJet<O> tanh(const MultiJet<O>& a) {
  return MultiJet<O>::apply(a, tanh(Jet<2>::variable(a.value())));
}
template <int O>
MultiJet<O> logistic(const MultiJet<O>& a) {
  return MultiJet<O>::apply(a, logistic(Jet<2>::variable(a.value())));
}
template <int O>
MultiJet<O> pow(const MultiJet<O>& a, double p) {
  return MultiJet<O>::apply(a, pow(Jet<2>::variable(a.value()), p));
}
template <int O>
MultiJet<O> lgamma(const MultiJet<O>& a) {
  return MultiJet<O>::apply(a, lgamma(Jet<2>::variable(a.value())));
}
template <int O>
MultiJet<O> square(const MultiJet<O>& a) {
  return a * a;
}

}  // namespace alcs::ad
