#include "alcs/diagnostics/recovery.hpp"

#include <random>

#include "alcs/diagnostics/importance.hpp"
#include "alcs/errors.hpp"
#include "alcs/sampler/rng.hpp"

namespace alcs {

std::vector<JointSample> recover_posterior(const NsResult& run, const HierarchicalModel& model,
                                           std::size_t s, std::uint64_t seed,
                                           const CollapseOptions& opt) {
  if (run.posterior.empty()) throw ConfigError("run has no posterior samples");
  std::vector<double> w;
  w.reserve(run.posterior.size());
  for (const auto& p : run.posterior) w.push_back(p.weight);
  auto rng = make_stream(seed, 0x2ec, 0);
  const auto idx = systematic_resample(w, s, rng);

  const std::size_t dt = model.theta_dim();
  std::vector<JointSample> out;
  out.reserve(s);
  for (std::size_t i = 0; i < s; ++i) {
    const PosteriorSample& p = run.posterior[idx[i]];
    if (static_cast<std::size_t>(p.params.size()) < dt)
      throw ConfigError("posterior samples do not carry theta for this model");
    JointSample js;
    js.theta = p.params.head(static_cast<Eigen::Index>(dt));
    js.source = idx[i];
    const auto b = model.bind(as_span(js.theta));
    const CollapseResult r = collapsed_loglik_gaussian(*b, opt, p.cache.get());
    js.flags = r.flags;
    if (!r.cache) throw IndefiniteHessian(0.0, 0);
    const StructuredCholesky chol = StructuredCholesky::factor(r.cache->hessian);
    auto zr = make_stream(seed, 0x2ed, i);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector eps(r.z_hat.size());
    for (Eigen::Index j = 0; j < eps.size(); ++j) eps[j] = normal(zr);
    js.z = r.z_hat + chol.upper_solve(eps);
    out.push_back(std::move(js));
  }
  return out;
}

}  // namespace alcs
