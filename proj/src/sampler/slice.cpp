#include "alcs/sampler/slice.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "alcs/errors.hpp"

namespace alcs {

Matrix live_covariance_factor(const std::vector<LivePoint>& live) {
  const Eigen::Index d = static_cast<Eigen::Index>(live.front().u.size());
  Vector mean = Vector::Zero(d);
  for (const auto& p : live) mean += Eigen::Map<const Vector>(p.u.data(), d);
  mean /= static_cast<double>(live.size());
  Matrix cov = Matrix::Zero(d, d);
  for (const auto& p : live) {
    const Vector r = Eigen::Map<const Vector>(p.u.data(), d) - mean;
    cov.noalias() += r * r.transpose();
  }
  cov /= static_cast<double>(std::max<std::size_t>(live.size() - 1, 1));
  double jitter = 1e-12 * std::max(cov.trace() / static_cast<double>(d), 1e-300);
  for (int attempt = 0; attempt < 20; ++attempt, jitter *= 10.0) {
    Eigen::LLT<Matrix> llt(cov + jitter * Matrix::Identity(d, d));
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  return 1e-6 * Matrix::Identity(d, d);
}

namespace {

struct Candidate {
  std::vector<double> u;
  bool inside = false;
  Evaluation e;
};

class Slicer {
 public:
  Slicer(const Likelihood& like, double thr_logl, double thr_tie, std::size_t& evals)
      : like_(like), thr_l_(thr_logl), thr_t_(thr_tie), evals_(evals) {}

  // Evaluate x0 + t d; the parent cache warm-starts the collapse.
  Candidate at(const std::vector<double>& x0, const Vector& d, double t,
               const WarmStartCache* parent) {
    Candidate c;
    c.u.resize(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) {
      c.u[i] = x0[i] + t * d[static_cast<Eigen::Index>(i)];
      if (!(c.u[i] > 0.0 && c.u[i] < 1.0)) return c;
    }
    c.e = like_.evaluate(std::span<const double>(c.u).first(like_.dim()), parent);
    ++evals_;
    c.inside = above(c.e.logl, c.u.back(), thr_l_, thr_t_);
    return c;
  }

 private:
  const Likelihood& like_;
  double thr_l_, thr_t_;
  std::size_t& evals_;
};

}  // namespace

LivePoint slice_sample_constrained(const Likelihood& like, const LivePoint& start,
                                   double thr_logl, double thr_tie, const Matrix& cov_factor,
                                   const SliceSettings& s, std::mt19937_64& rng,
                                   std::size_t& evaluations) {
  if (!above(start.logl, start.tie(), thr_logl, thr_tie))
    throw NumericalError("slice start point is not above the threshold");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Slicer slicer(like, thr_logl, thr_tie, evaluations);
  const Eigen::Index d = cov_factor.rows();

  LivePoint cur = start;
  for (int step = 0; step < s.steps; ++step) {
    bool moved = false;
    for (int attempt = 0; attempt <= s.retries && !moved; ++attempt) {
      Vector n(d);
      for (Eigen::Index i = 0; i < d; ++i) n[i] = normal(rng);
      const Vector dir = cov_factor * (n / n.norm());
      const WarmStartCache* parent = cur.cache.get();

      double lo = -s.width * unif(rng);
      double hi = lo + s.width;
      for (int k = 0; k < s.max_step_out && slicer.at(cur.u, dir, lo, parent).inside; ++k)
        lo -= s.width;
      for (int k = 0; k < s.max_step_out && slicer.at(cur.u, dir, hi, parent).inside; ++k)
        hi += s.width;

      while (hi - lo > 1e-12) {
        const double t = lo + (hi - lo) * unif(rng);
        Candidate c = slicer.at(cur.u, dir, t, parent);
        if (c.inside) {
          cur.u = std::move(c.u);
          cur.logl = c.e.logl;
          cur.flags = c.e.flags;
          cur.cache = std::move(c.e.cache);
          moved = true;
          break;
        }
        (t < 0.0 ? lo : hi) = t;
      }
      // bracket collapsed onto the start: retry with a fresh direction
    }
    if (!moved)
      throw StuckSampler("slice bracket collapsed " + std::to_string(s.retries + 1) +
                         " times at logL threshold " + std::to_string(thr_logl));
  }
  cur.params = like.params(std::span<const double>(cur.u).first(like.dim()));
  return cur;
}

}  // namespace alcs
