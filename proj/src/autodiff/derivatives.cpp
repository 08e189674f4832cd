#include "alcs/autodiff/derivatives.hpp"

#include <cmath>
#include <string>

namespace alcs::ad {

namespace {

constexpr std::size_t kVectorModeThreshold = 24;

template <int N>
Jet<N> directional_pass(const DiffFunction& f, std::span<const double> x,
                        std::span<const double> v, std::vector<Jet<N>>& buf) {
  buf.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) buf[j] = Jet<N>::variable(x[j], v[j]);
  return f(std::span<const Jet<N>>(buf));
}

// Locate the coordinate whose seeding produces a non-finite second-order jet;
// -1 when the unseeded pass already fails.
long find_bad_index(const DiffFunction& f, std::span<const double> x) {
  std::vector<Jet<2>> buf;
  std::vector<double> e(x.size(), 0.0);
  try {
    directional_pass<2>(f, x, e, buf).checked();
  } catch (const NonFiniteDerivative&) {
    return -1;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    e[i] = 1.0;
    try {
      directional_pass<2>(f, x, e, buf).checked();
    } catch (const NonFiniteDerivative&) {
      return static_cast<long>(i);
    }
    e[i] = 0.0;
  }
  return -1;
}

bool finite_multijet(const MultiJet<2>& m) {
  if (!std::isfinite(m.value())) return false;
  for (double g : m.grad())
    if (!std::isfinite(g)) return false;
  for (double h : m.hess_packed())
    if (!std::isfinite(h)) return false;
  return true;
}

}  // namespace

ValueGradient value_and_gradient(const DiffFunction& f, std::span<const double> x,
                                 GradientMode mode) {
  const std::size_t n = x.size();
  ValueGradient out;
  out.grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (n == 0) {
    out.value = f(x);
    return out;
  }
  if (mode == GradientMode::Auto)
    mode = n > kVectorModeThreshold ? GradientMode::Vector : GradientMode::UnivariatePasses;

  if (mode == GradientMode::Vector) {
    std::vector<MultiJet<1>> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = MultiJet<1>::variable(x[i], i, n);
    MultiJet<1> r;
    try {
      r = f(std::span<const MultiJet<1>>(xs));
    } catch (const NonFiniteDerivative&) {
      throw NonFiniteDerivative(find_bad_index(f, x));
    }
    out.value = r.value();
    for (std::size_t i = 0; i < n; ++i) out.grad[i] = r.grad(i);
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(out.grad[i])) throw NonFiniteDerivative(static_cast<long>(i));
    return out;
  }

  std::vector<Jet<1>> xs(n);
  for (std::size_t j = 0; j < n; ++j) xs[j] = Jet<1>(x[j]);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i][1] = 1.0;
    Jet<1> r;
    try {
      r = f(std::span<const Jet<1>>(xs));
    } catch (const NonFiniteDerivative&) {
      throw NonFiniteDerivative(static_cast<long>(i));
    }
    if (!std::isfinite(r[1])) throw NonFiniteDerivative(static_cast<long>(i));
    out.value = r[0];
    out.grad[i] = r[1];
    xs[i][1] = 0.0;
  }
  return out;
}

Eigen::VectorXd gradient(const DiffFunction& f, std::span<const double> x, GradientMode mode) {
  return value_and_gradient(f, x, mode).grad;
}

Eigen::VectorXd hvp(const DiffFunction& f, std::span<const double> x,
                    std::span<const double> v) {
  const std::size_t n = x.size();
  if (v.size() != n) throw InvalidDirection("hvp: direction has wrong length");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (n == 0) return out;
  std::vector<HvpJet> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = HvpJet::variable(x[i], v[i], i, n);
  HvpJet r;
  try {
    r = f(std::span<const HvpJet>(xs));
  } catch (const NonFiniteDerivative&) {
    throw NonFiniteDerivative(find_bad_index(f, x));
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[static_cast<Eigen::Index>(i)] = r.hv(i);
    if (!std::isfinite(out[static_cast<Eigen::Index>(i)]))
      throw NonFiniteDerivative(static_cast<long>(i));
  }
  return out;
}

Eigen::MatrixXd hessian_dense(const DiffFunction& f, std::span<const double> x) {
  const std::size_t n = x.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  if (n == 0) return h;
  std::vector<MultiJet<2>> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = MultiJet<2>::variable(x[i], i, n);
  MultiJet<2> r;
  try {
    r = f(std::span<const MultiJet<2>>(xs));
  } catch (const NonFiniteDerivative&) {
    throw NonFiniteDerivative(find_bad_index(f, x));
  }
  if (!finite_multijet(r)) throw NonFiniteDerivative(find_bad_index(f, x));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = r.hess(i, j);
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return h;
}

std::vector<double> directional_taylor(const DiffFunction& f, std::span<const double> x,
                                       std::span<const double> v, int order) {
  if (order < 1 || order > 4) throw InvalidDirection("order must be in 1..4");
  if (v.size() != x.size()) throw InvalidDirection("direction has wrong length");
  double norm2 = 0.0;
  for (double vi : v) norm2 += vi * vi;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
    throw InvalidDirection("direction norm " + std::to_string(std::sqrt(norm2)) +
                           " is not 1");

  auto collect = [&](const auto& jet) {
    std::vector<double> c(static_cast<std::size_t>(order) + 1);
    for (int k = 0; k <= order; ++k) c[static_cast<std::size_t>(k)] = jet[k];
    return c;
  };
  switch (order) {
    case 1: {
      std::vector<Jet<1>> b;
      return collect(directional_pass<1>(f, x, v, b).checked());
    }
    case 2: {
      std::vector<Jet<2>> b;
      return collect(directional_pass<2>(f, x, v, b).checked());
    }
    case 3: {
      std::vector<Jet<3>> b;
      return collect(directional_pass<3>(f, x, v, b).checked());
    }
    default: {
      std::vector<Jet<4>> b;
      return collect(directional_pass<4>(f, x, v, b).checked());
    }
  }
}

}  // namespace alcs::ad
