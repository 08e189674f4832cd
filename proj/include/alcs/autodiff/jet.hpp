#pragma once

// Truncated univariate Taylor series. Jet<N> holds c_0..c_N of
// f(x + t v) = sum_k c_k t^k, so c_k = f^{(k)}(x; v) / k!.

#include <array>
#include <cmath>

#include "alcs/autodiff/special.hpp"
#include "alcs/errors.hpp"

namespace alcs::ad {

template <int N>
class Jet {
  static_assert(N >= 0 && N <= 4, "Jet order must be in 0..4");

 public:
  static constexpr int order = N;

  Jet() = default;
  Jet(double v) { c_[0] = v; }  // NOLINT: constants promote implicitly

  static Jet variable(double x, double direction = 1.0) {
    Jet j(x);
    if constexpr (N >= 1) j.c_[1] = direction;
    return j;
  }

  double value() const { return c_[0]; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }
  const std::array<double, N + 1>& coeffs() const { return c_; }

  Jet& operator+=(const Jet& b) {
    for (int k = 0; k <= N; ++k) c_[k] += b.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& b) {
    for (int k = 0; k <= N; ++k) c_[k] -= b.c_[k];
    return *this;
  }
  Jet& operator+=(double b) {
    c_[0] += b;
    return *this;
  }
  Jet& operator-=(double b) {
    c_[0] -= b;
    return *this;
  }
  Jet& operator*=(double b) {
    for (auto& c : c_) c *= b;
    return *this;
  }
  Jet& operator*=(const Jet& b) { return *this = *this * b; }
  Jet& operator/=(const Jet& b) { return *this = *this / b; }
  Jet& operator/=(double b) {
    for (auto& c : c_) c /= b;
    return *this;
  }

  friend Jet operator-(Jet a) {
    for (auto& c : a.c_) c = -c;
    return a;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b) { return -b + a; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a /= b; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= N; ++k) {
      double s = 0.0;
      for (int i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
      r.c_[k] = s;
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    const double b0 = b.c_[0];
    for (int k = 0; k <= N; ++k) {
      double s = a.c_[k];
      for (int i = 1; i <= k; ++i) s -= b.c_[i] * r.c_[k - i];
      r.c_[k] = s / b0;
    }
    return r.checked();
  }
  friend Jet operator/(double a, const Jet& b) { return Jet(a) / b; }

  Jet checked() const {
    for (double c : c_)
      if (!std::isfinite(c)) throw NonFiniteDerivative();
    return *this;
  }

 private:
  std::array<double, N + 1> c_{};
};

// Elementary functions. Plain doubles get the same names so that model code
// can be written once against ad::exp, ad::log, ...

inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double pow(double x, double p) { return std::pow(x, p); }
inline double lgamma(double x) { return std::lgamma(x); }
inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double square(double x) { return x * x; }

template <int N>
Jet<N> square(const Jet<N>& a) {
  return a * a;
}

template <int N>
Jet<N> exp(const Jet<N>& a) {
  Jet<N> e;
  e[0] = std::exp(a[0]);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += i * a[i] * e[k - i];
    e[k] = s / k;
  }
  return e.checked();
}

template <int N>
Jet<N> log(const Jet<N>& a) {
  Jet<N> l;
  const double a0 = a[0];
  l[0] = std::log(a0);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int i = 1; i < k; ++i) s += i * l[i] * a[k - i];
    l[k] = (a[k] - s / k) / a0;
  }
  return l.checked();
}

template <int N>
Jet<N> sqrt(const Jet<N>& a) {
  Jet<N> s;
  s[0] = std::sqrt(a[0]);
  for (int k = 1; k <= N; ++k) {
    double acc = a[k];
    for (int i = 1; i < k; ++i) acc -= s[i] * s[k - i];
    s[k] = acc / (2.0 * s[0]);
  }
  return s.checked();
}

// y = a^p: k a0 y_k = sum_{i=1}^k (p i - (k - i)) a_i y_{k-i}
template <int N>
Jet<N> pow(const Jet<N>& a, double p) {
  Jet<N> y;
  const double a0 = a[0];
  y[0] = std::pow(a0, p);
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += (p * i - (k - i)) * a[i] * y[k - i];
    y[k] = s / (k * a0);
  }
  return y.checked();
}

// t' = a' (1 - t^2)
template <int N>
Jet<N> tanh(const Jet<N>& a) {
  Jet<N> t, u;
  t[0] = std::tanh(a[0]);
  u[0] = 1.0 - t[0] * t[0];
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += i * a[i] * u[k - i];
    t[k] = s / k;
    double q = 0.0;
    for (int i = 0; i <= k; ++i) q += t[i] * t[k - i];
    u[k] = -q;
  }
  return t.checked();
}

// s' = a' s (1 - s)
template <int N>
Jet<N> logistic(const Jet<N>& a) {
  Jet<N> s, v;
  s[0] = logistic(a[0]);
  v[0] = s[0] * (1.0 - s[0]);
  for (int k = 1; k <= N; ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += i * a[i] * v[k - i];
    s[k] = acc / k;
    double q = 0.0;
    for (int i = 0; i <= k; ++i) q += s[i] * s[k - i];
    v[k] = s[k] - q;
  }
  return s.checked();
}

// Generic composition: d[r] = f^{(r)}(a0) / r!
template <int N>
Jet<N> compose(const Jet<N>& a, const std::array<double, N + 1>& d) {
  Jet<N> h = a;
  h[0] = 0.0;
  Jet<N> r(d[N]);
  for (int k = N - 1; k >= 0; --k) r = r * h + d[k];
  return r.checked();
}

template <int N>
Jet<N> lgamma(const Jet<N>& a) {
  std::array<double, N + 1> d{};
  d[0] = std::lgamma(a[0]);
  double fact = 1.0;
  for (int r = 1; r <= N; ++r) {
    fact *= r;
    d[r] = polygamma(r - 1, a[0]) / fact;
  }
  return compose(a, d);
}

}  // namespace alcs::ad
