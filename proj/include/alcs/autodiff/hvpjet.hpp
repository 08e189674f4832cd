#pragma once

// Forward-over-forward scalar for Hessian-vector products in one pass: value,
// derivative along a fixed seed v, the gradient, and the gradient of the
// directional derivative (which is H v). Empty vectors mean zero.

#include <cmath>
#include <vector>

#include "alcs/autodiff/jet.hpp"

namespace alcs::ad {

class HvpJet {
 public:
  HvpJet() = default;
  HvpJet(double v) : v_(v) {}  // NOLINT

  static HvpJet variable(double x, double seed, std::size_t i, std::size_t n) {
    HvpJet r(x);
    r.d_ = seed;
    r.g_.assign(n, 0.0);
    r.g_[i] = 1.0;
    return r;
  }

  double value() const { return v_; }
  double dir() const { return d_; }
  double grad(std::size_t i) const { return g_.empty() ? 0.0 : g_[i]; }
  double hv(std::size_t i) const { return gd_.empty() ? 0.0 : gd_[i]; }

  HvpJet& operator+=(const HvpJet& b) { return add_scaled(1.0, b); }
  HvpJet& operator-=(const HvpJet& b) { return add_scaled(-1.0, b); }
  HvpJet& operator+=(double b) {
    v_ += b;
    return *this;
  }
  HvpJet& operator-=(double b) {
    v_ -= b;
    return *this;
  }
  HvpJet& operator*=(double b) {
    v_ *= b;
    d_ *= b;
    for (auto& x : g_) x *= b;
    for (auto& x : gd_) x *= b;
    return *this;
  }
  HvpJet& operator/=(double b) { return *this *= 1.0 / b; }
  HvpJet& operator*=(const HvpJet& b) { return *this = *this * b; }
  HvpJet& operator/=(const HvpJet& b) { return *this = *this / b; }

  HvpJet& add_scaled(double alpha, const HvpJet& b) {
    v_ += alpha * b.v_;
    d_ += alpha * b.d_;
    axpy(g_, alpha, b.g_);
    axpy(gd_, alpha, b.gd_);
    return *this;
  }

  friend HvpJet operator-(HvpJet a) { return a *= -1.0; }
  friend HvpJet operator+(HvpJet a, const HvpJet& b) { return a += b; }
  friend HvpJet operator-(HvpJet a, const HvpJet& b) { return a -= b; }
  friend HvpJet operator+(HvpJet a, double b) { return a += b; }
  friend HvpJet operator+(double a, HvpJet b) { return b += a; }
  friend HvpJet operator-(HvpJet a, double b) { return a -= b; }
  friend HvpJet operator-(double a, HvpJet b) {
    b *= -1.0;
    return b += a;
  }
  friend HvpJet operator*(HvpJet a, double b) { return a *= b; }
  friend HvpJet operator*(double a, HvpJet b) { return b *= a; }
  friend HvpJet operator/(HvpJet a, double b) { return a /= b; }

  friend HvpJet operator*(const HvpJet& a, const HvpJet& b) {
    HvpJet r(a.v_ * b.v_);
    r.d_ = a.d_ * b.v_ + a.v_ * b.d_;
    axpy(r.g_, b.v_, a.g_);
    axpy(r.g_, a.v_, b.g_);
    axpy(r.gd_, b.v_, a.gd_);
    axpy(r.gd_, a.v_, b.gd_);
    axpy(r.gd_, b.d_, a.g_);
    axpy(r.gd_, a.d_, b.g_);
    return r;
  }
  friend HvpJet operator/(const HvpJet& a, const HvpJet& b) {
    return a * apply(b, 1.0 / Jet<2>::variable(b.v_));
  }
  friend HvpJet operator/(double a, const HvpJet& b) {
    return apply(b, 1.0 / Jet<2>::variable(b.v_)) * a;
  }

  // f(a) from the Taylor coefficients (f, f', f''/2) at a.value().
  static HvpJet apply(const HvpJet& a, const Jet<2>& f) {
    for (int k = 0; k <= 2; ++k)
      if (!std::isfinite(f[k])) throw NonFiniteDerivative();
    const double f1 = f[1], f2 = 2.0 * f[2];
    HvpJet r(f[0]);
    r.d_ = f1 * a.d_;
    axpy(r.g_, f1, a.g_);
    axpy(r.gd_, f1, a.gd_);
    axpy(r.gd_, f2 * a.d_, a.g_);
    return r;
  }

 private:
  static void axpy(std::vector<double>& y, double alpha, const std::vector<double>& x) {
    if (x.empty() || alpha == 0.0) return;
    if (y.empty()) {
      y.resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = alpha * x[i];
      return;
    }
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
  }

  double v_ = 0.0, d_ = 0.0;
  std::vector<double> g_, gd_;
};

inline HvpJet exp(const HvpJet& a) { return HvpJet::apply(a, exp(Jet<2>::variable(a.value()))); }
inline HvpJet log(const HvpJet& a) { return HvpJet::apply(a, log(Jet<2>::variable(a.value()))); }
inline HvpJet sqrt(const HvpJet& a) { return HvpJet::apply(a, sqrt(Jet<2>::variable(a.value()))); }
inline HvpJet tanh(const HvpJet& a) { return HvpJet::apply(a, tanh(Jet<2>::variable(a.value()))); }
inline HvpJet logistic(const HvpJet& a) {
  return HvpJet::apply(a, logistic(Jet<2>::variable(a.value())));
}
inline HvpJet pow(const HvpJet& a, double p) {
  return HvpJet::apply(a, pow(Jet<2>::variable(a.value()), p));
}
inline HvpJet lgamma(const HvpJet& a) {
  return HvpJet::apply(a, lgamma(Jet<2>::variable(a.value())));
}
inline HvpJet square(const HvpJet& a) { return a * a; }

}  // namespace alcs::ad
