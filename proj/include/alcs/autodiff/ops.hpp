#pragma once

#include <cstddef>
#include <span>

#include "alcs/autodiff/hvpjet.hpp"
#include "alcs/autodiff/jet.hpp"
#include "alcs/autodiff/multijet.hpp"

namespace alcs::ad {

inline double value_of(double x) { return x; }
template <int N>
double value_of(const Jet<N>& x) {
  return x.value();
}
template <int O>
double value_of(const MultiJet<O>& x) {
  return x.value();
}

inline double value_of(const HvpJet& x) { return x.value(); }

// sum_i a_i x_i
template <class T>
T dot(std::span<const double> a, std::span<const T> x) {
  T acc(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0.0) acc += a[i] * x[i];
  }
  return acc;
}

template <int O>
MultiJet<O> dot(std::span<const double> a, std::span<const MultiJet<O>> x) {
  MultiJet<O> acc(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0.0) acc.add_scaled(a[i], x[i]);
  }
  return acc;
}

inline HvpJet dot(std::span<const double> a, std::span<const HvpJet> x) {
  HvpJet acc(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0.0) acc.add_scaled(a[i], x[i]);
  }
  return acc;
}

// log N(x; mean, sd) with the mean and sd held constant.
template <class T>
T normal_logpdf(const T& x, double mean, double sd) {
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  const T r = (x - mean) / sd;
  return -0.5 * (r * r) - std::log(sd) - kHalfLog2Pi;
}

}  // namespace alcs::ad
