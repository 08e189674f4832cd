#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>

#include "alcs/autodiff/hvpjet.hpp"
#include "alcs/autodiff/jet.hpp"
#include "alcs/autodiff/multijet.hpp"

namespace alcs::ad {

// Type-erased scalar function of a vector, evaluable on every scalar type the
// derivative drivers use. Wrap a generic callable `T f(std::span<const T>)`.
class DiffFunction {
 public:
  template <class F>
  DiffFunction(std::size_t dim, F f)
      : dim_(dim), impl_(std::make_shared<Model<F>>(std::move(f))) {}

  std::size_t dim() const { return dim_; }

  double operator()(std::span<const double> x) const { return impl_->eval(x); }
  template <int N>
  Jet<N> operator()(std::span<const Jet<N>> x) const {
    return impl_->eval(x);
  }
  template <int O>
  MultiJet<O> operator()(std::span<const MultiJet<O>> x) const {
    return impl_->eval(x);
  }
  HvpJet operator()(std::span<const HvpJet> x) const { return impl_->eval(x); }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual double eval(std::span<const double>) const = 0;
    virtual Jet<1> eval(std::span<const Jet<1>>) const = 0;
    virtual Jet<2> eval(std::span<const Jet<2>>) const = 0;
    virtual Jet<3> eval(std::span<const Jet<3>>) const = 0;
    virtual Jet<4> eval(std::span<const Jet<4>>) const = 0;
    virtual MultiJet<1> eval(std::span<const MultiJet<1>>) const = 0;
    virtual MultiJet<2> eval(std::span<const MultiJet<2>>) const = 0;
    virtual HvpJet eval(std::span<const HvpJet>) const = 0;
  };

  template <class F>
  struct Model final : Concept {
    explicit Model(F fn) : f(std::move(fn)) {}
    double eval(std::span<const double> x) const override { return f(x); }
    Jet<1> eval(std::span<const Jet<1>> x) const override { return f(x); }
    Jet<2> eval(std::span<const Jet<2>> x) const override { return f(x); }
    Jet<3> eval(std::span<const Jet<3>> x) const override { return f(x); }
    Jet<4> eval(std::span<const Jet<4>> x) const override { return f(x); }
    MultiJet<1> eval(std::span<const MultiJet<1>> x) const override { return f(x); }
    MultiJet<2> eval(std::span<const MultiJet<2>> x) const override { return f(x); }
    HvpJet eval(std::span<const HvpJet> x) const override { return f(x); }
    F f;
  };

  std::size_t dim_;
  std::shared_ptr<const Concept> impl_;
};

}  // namespace alcs::ad
