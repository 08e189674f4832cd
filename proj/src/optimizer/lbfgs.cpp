#include "alcs/optimizer/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "alcs/autodiff/derivatives.hpp"

namespace alcs {

void OptimizerConfig::validate() const {
  if (memory <= 0 || max_iterations <= 0 || !(grad_tol > 0.0) || !(c1 > 0.0) ||
      !(shrink > 0.0 && shrink < 1.0) || max_trials <= 0)
    throw ConfigError("optimizer settings must be positive (shrink in (0,1))");
}

WarmStart warm_start(const WarmStartCache& cache) {
  return {cache.z_hat, WhiteningTransform(cache.z_hat, cache.hessian)};
}

namespace {

struct Pair {
  Vector s, y;
  double rho;
};

// d = -H_k g by the two-loop recursion.
Vector two_loop(const std::deque<Pair>& mem, const Vector& g) {
  Vector q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].rho * mem[i].s.dot(q);
    q -= alpha[i] * mem[i].y;
  }
  if (!mem.empty()) {
    const Pair& last = mem.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double beta = mem[i].rho * mem[i].y.dot(q);
    q += (alpha[i] - beta) * mem[i].s;
  }
  return -q;
}

}  // namespace

OptResult lbfgs_minimize(const ad::DiffFunction& f, const Vector& z0,
                         const WhiteningTransform& w, const OptimizerConfig& cfg) {
  cfg.validate();
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  auto eval_grad = [&](const Vector& x, double& fx) {
    const Vector z = w.from_whitened(x);
    auto vg = ad::value_and_gradient(f, as_span(z));
    fx = vg.value;
    return w.gradient_to_whitened(vg.grad);
  };

  Vector x = w.to_whitened(z0);
  double fx = f(as_span(z0));
  if (!std::isfinite(fx)) throw NonFiniteObjective();
  Vector g = eval_grad(x, fx);

  std::deque<Pair> mem;
  OptResult res;
  int it = 0;
  for (;; ++it) {
    Vector d = two_loop(mem, g);
    double gd = g.dot(d);
    if (!(gd < 0.0)) {
      mem.clear();
      d = -g;
      gd = -g.squaredNorm();
    }
    res.grad_norm = std::sqrt(-gd);
    if (res.grad_norm <= cfg.grad_tol) {
      res.converged = true;
      break;
    }
    if (it >= cfg.max_iterations) break;

    double step = 1.0;
    bool accepted = false;
    Vector xn;
    double fn = 0.0;
    const double slack = 8.0 * kEps * std::abs(fx);
    for (int trial = 0; trial < cfg.max_trials; ++trial, step *= cfg.shrink) {
      xn = x + step * d;
      fn = f(as_span(w.from_whitened(xn)));
      if (std::isfinite(fn) && fn <= fx + cfg.c1 * step * gd + slack) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.z = w.from_whitened(x);
      res.value = fx;
      res.iterations = it;
      throw LineSearchStalled(res);
    }

    double fnew = fn;
    const Vector gn = eval_grad(xn, fnew);
    Pair p{xn - x, gn - g, 0.0};
    const double sy = p.s.dot(p.y);
    if (sy > 1e-12 * p.s.norm() * p.y.norm() && sy > 0.0) {
      p.rho = 1.0 / sy;
      mem.push_back(std::move(p));
      if (static_cast<int>(mem.size()) > cfg.memory) mem.pop_front();
    }
    x = xn;
    fx = fn;
    g = gn;
  }
  res.z = w.from_whitened(x);
  res.value = fx;
  res.iterations = it;
  return res;
}

}  // namespace alcs
