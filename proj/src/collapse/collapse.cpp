#include "alcs/collapse/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "alcs/autodiff/derivatives.hpp"
#include "alcs/autodiff/special.hpp"
#include "alcs/models/model.hpp"

namespace alcs {

namespace {

constexpr double kHalfLog2Pi = 0.5 * kLog2Pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

ad::DiffFunction negated(const ad::DiffFunction& g) {
  return ad::DiffFunction(g.dim(), [g](auto z) { return -g(z); });
}

struct Internal {
  CollapseResult r;
  double pivot_min = 1.0, pivot_max = 1.0;
};

Internal solve(const ad::DiffFunction& log_joint, const LatentStructure& s,
               const Vector& prior_mean, const StructuredMatrix& prior_precision,
               const CollapseOptions& opt, const WarmStartCache* warm,
               const StudentOptions* student) {
  Internal out;
  CollapseResult& r = out.r;
  const std::size_t n = s.dim;
  if (n == 0) {
    r.loglik = r.log_joint = log_joint(std::span<const double>());
    r.converged = true;
    r.cache = std::make_shared<WarmStartCache>(WarmStartCache{Vector(), StructuredMatrix(s)});
    return out;
  }
  const ad::DiffFunction f = negated(log_joint);

  std::optional<WarmStart> start;
  if (warm != nullptr && static_cast<std::size_t>(warm->z_hat.size()) == n) {
    try {
      start.emplace(warm_start(*warm));
      if (!std::isfinite(f(as_span(start->x0)))) {
        start.reset();
        r.flags |= kWarmStartFallback;
      }
    } catch (const SingularWhitening&) {
      r.flags |= kWarmStartFallback;
    }
  }
  if (!start) start.emplace(WarmStart{prior_mean, WhiteningTransform(prior_mean, prior_precision)});

  OptResult opt_res;
  try {
    opt_res = lbfgs_minimize(f, start->x0, start->whitening, opt.optimizer);
  } catch (const LineSearchStalled& e) {
    opt_res = e.best();
    r.flags |= kLineSearchStalled;
  }

  Vector z = opt_res.z;
  double fz = opt_res.value;
  const double tol = opt.optimizer.grad_tol;

  auto fail_indefinite = [&]() {
    r.flags |= kIndefinite | kNotConverged;
    r.loglik = -kInf;
    r.log_joint = -fz;
    r.z_hat = z;
    r.converged = false;
    return out;
  };

  StructuredMatrix h;
  std::optional<StructuredCholesky> chol;
  Vector g;
  double dec = kInf;
  auto refresh = [&]() {
    h = latent_hessian(f, as_span(z), s, opt.verify_structure);
    chol.emplace(StructuredCholesky::factor(h));
    g = ad::gradient(f, as_span(z));
    dec = std::sqrt(std::max(0.0, g.dot(chol->solve(g))));
  };
  try {
    refresh();
    // Newton polish with the exact Hessian. Near the optimum f can no longer
    // resolve the predicted decrease, so the decrement itself decides.
    for (int k = 0; k < opt.newton_polish && !(dec <= tol); ++k) {
      const Vector zn = z - chol->solve(g);
      const double fn = f(as_span(zn));
      if (!std::isfinite(fn)) break;
      const double noise = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(fz);
      if (fn <= fz + noise) {
        z = zn;
        fz = fn;
        refresh();
        continue;
      }
      if (dec > 1e-4) break;
      const Vector z_old = z;
      const double f_old = fz, dec_old = dec;
      z = zn;
      fz = fn;
      refresh();
      if (dec >= dec_old) {
        z = z_old;
        fz = f_old;
        refresh();
        break;
      }
    }
  } catch (const IndefiniteHessian&) {
    return fail_indefinite();
  }

  r.z_hat = z;
  r.log_joint = -fz;
  r.grad_norm = dec;
  r.converged = dec <= tol;
  if (!r.converged) r.flags |= kNotConverged;
  r.half_logdet = chol->half_logdet();
  r.condition = chol->condition_estimate();
  out.pivot_min = chol->min_pivot();
  out.pivot_max = chol->max_pivot();

  if (student == nullptr) {
    r.loglik = r.log_joint + static_cast<double>(n) * kHalfLog2Pi - r.half_logdet;
  } else {
    const auto dirs = whitened_directions(*chol);
    double sum_q0 = 0.0;
    r.nu.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      double nu = student->fixed_nu;
      if (student->estimator != NuEstimator::Fixed) {
        const auto c = ad::directional_taylor(log_joint, as_span(z), as_span(dirs[j]), 4);
        const double f2 = 2.0 * c[2], f4 = 24.0 * c[4];
        if (!(f2 < 0.0)) throw NonConcaveDirection(j);
        nu = estimate_nu(f2, f4, *student);
      }
      nu = std::clamp(nu, student->nu_min, student->nu_max);
      if (nu <= student->nu_min) r.flags |= kNuClampedLow;
      r.nu.push_back(nu);
      sum_q0 += student_log_q0(nu);
    }
    r.loglik = r.log_joint - r.half_logdet - sum_q0;
  }
  r.cache = std::make_shared<WarmStartCache>(WarmStartCache{z, std::move(h)});
  return out;
}

Matrix block_of(const StructuredMatrix& a, std::size_t b) {
  if (a.structure().kind == StructureKind::BlockDiagonal) return a.blocks[b];
  return Matrix::Constant(1, 1, a.diag[static_cast<Eigen::Index>(b)]);
}

CollapseResult collapse_model(const BoundModel& m, const CollapseOptions& opt,
                              const WarmStartCache* warm, const StudentOptions* student) {
  const LatentStructure& s = m.structure();
  const bool blocked = s.kind == StructureKind::BlockDiagonal ||
                       (s.kind == StructureKind::Diagonal && m.separable());
  if (!blocked) {
    CollapseResult r = solve(m.log_joint(), s, m.prior_mean(), m.prior_precision(), opt, warm,
                             student)
                           .r;
    r.flags |= m.flags();
    return r;
  }

  const std::vector<std::size_t> sizes =
      s.kind == StructureKind::BlockDiagonal ? s.block_sizes : std::vector<std::size_t>(s.dim, 1);
  const auto off = LatentStructure::block_diagonal(sizes).block_offsets();
  const Vector mean = m.prior_mean();
  const StructuredMatrix prec = m.prior_precision();
  const bool warm_ok = warm != nullptr && warm->hessian.structure().kind == s.kind &&
                       warm->hessian.dim() == s.dim &&
                       static_cast<std::size_t>(warm->z_hat.size()) == s.dim;

  CollapseResult total;
  total.converged = true;
  total.z_hat.resize(static_cast<Eigen::Index>(s.dim));
  StructuredMatrix h(s);
  double pmin = kInf, pmax = 0.0, dec2 = 0.0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    const Eigen::Index o = static_cast<Eigen::Index>(off[b]);
    const Eigen::Index sz = static_cast<Eigen::Index>(sizes[b]);
    const auto bs = LatentStructure::dense(sizes[b]);
    const StructuredMatrix bprec = StructuredMatrix::from_dense(block_of(prec, b), bs);
    std::optional<WarmStartCache> bwarm;
    if (warm_ok)
      bwarm.emplace(WarmStartCache{warm->z_hat.segment(o, sz),
                                   StructuredMatrix::from_dense(block_of(warm->hessian, b), bs)});
    Internal bi = solve(m.block_log_joint(b), bs, mean.segment(o, sz), bprec, opt,
                        bwarm ? &*bwarm : nullptr, student);
    const CollapseResult& br = bi.r;
    total.flags |= br.flags;
    total.z_hat.segment(o, sz) = br.z_hat;
    if (!std::isfinite(br.loglik)) {
      total.loglik = -kInf;
      total.converged = false;
      total.flags |= kNotConverged;
      return total;
    }
    total.loglik += br.loglik;
    total.log_joint += br.log_joint;
    total.half_logdet += br.half_logdet;
    total.converged = total.converged && br.converged;
    dec2 += br.grad_norm * br.grad_norm;
    pmin = std::min(pmin, bi.pivot_min);
    pmax = std::max(pmax, bi.pivot_max);
    total.nu.insert(total.nu.end(), br.nu.begin(), br.nu.end());
    if (s.kind == StructureKind::BlockDiagonal)
      h.blocks[b] = br.cache->hessian.dense;
    else
      h.diag[o] = br.cache->hessian.dense(0, 0);
  }
  total.grad_norm = std::sqrt(dec2);
  total.condition = (pmax / pmin) * (pmax / pmin);
  total.flags |= m.flags();
  total.cache = std::make_shared<WarmStartCache>(WarmStartCache{total.z_hat, std::move(h)});
  return total;
}

}  // namespace

std::vector<Vector> whitened_directions(const StructuredCholesky& l) {
  const std::size_t n = l.dim();
  std::vector<Vector> dirs;
  dirs.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector e = Vector::Zero(static_cast<Eigen::Index>(n));
    e[static_cast<Eigen::Index>(j)] = 1.0;
    Vector d = l.upper_solve(e);
    d /= d.norm();
    dirs.push_back(std::move(d));
  }
  return dirs;
}

double estimate_nu(double f2, double f4, const StudentOptions& opt) {
  double nu = opt.nu_max;
  switch (opt.estimator) {
    case NuEstimator::Fixed: nu = opt.fixed_nu; break;
    case NuEstimator::TaylorMatched:
      if (f4 > 0.0) nu = 6.0 * f2 * f2 / f4 - 1.0;
      break;
    case NuEstimator::AsWritten: {
      if (f4 > 0.0) {
        const double kappa = 3.0 * f4 / (f2 * f2) - 3.0;
        nu = 4.0 + 6.0 / kappa;
      }
      break;
    }
  }
  if (std::isnan(nu)) nu = opt.nu_max;
  return std::clamp(nu, opt.nu_min, opt.nu_max);
}

double student_log_q0(double nu) {
  return ad::lgamma_half_step(nu) - 0.5 * std::log(M_PI * (nu + 1.0));
}

CollapseResult collapse_problem(const ad::DiffFunction& log_joint, const LatentStructure& s,
                                const Vector& prior_mean, const StructuredMatrix& prior_precision,
                                const CollapseOptions& opt, const WarmStartCache* warm,
                                const StudentOptions* student) {
  return solve(log_joint, s, prior_mean, prior_precision, opt, warm, student).r;
}

CollapseResult collapsed_loglik_gaussian(const BoundModel& m, const CollapseOptions& opt,
                                         const WarmStartCache* warm) {
  return collapse_model(m, opt, warm, nullptr);
}

CollapseResult collapsed_loglik_student(const BoundModel& m, const StudentOptions& st,
                                        const CollapseOptions& opt, const WarmStartCache* warm) {
  return collapse_model(m, opt, warm, &st);
}

}  // namespace alcs
