#include "alcs/diagnostics/importance.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "alcs/errors.hpp"
#include "alcs/sampler/rng.hpp"

namespace alcs {

Proposal parse_proposal(const std::string& s) {
  if (s == "gaussian") return Proposal::Gaussian;
  if (s == "student") return Proposal::Student;
  throw ConfigError("unknown proposal '" + s + "'");
}

std::string to_string(Proposal p) { return p == Proposal::Gaussian ? "gaussian" : "student"; }

IsRecord is_ess(const HierarchicalModel& model, const Vector& theta, std::size_t k,
                Proposal proposal, std::uint64_t seed, const IsOptions& opt) {
  if (k < 2) throw ConfigError("importance sampling needs K >= 2");
  const auto b = model.bind(as_span(theta));
  const CollapseResult r = proposal == Proposal::Student
                               ? collapsed_loglik_student(*b, opt.student, opt.collapse)
                               : collapsed_loglik_gaussian(*b, opt.collapse);
  if (!std::isfinite(r.loglik)) throw DegenerateWeights();
  const StructuredCholesky chol = StructuredCholesky::factor(r.cache->hessian);
  const ad::DiffFunction f = b->log_joint();
  const Eigen::Index n = r.z_hat.size();

  auto rng = make_stream(seed, 0x15, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::student_t_distribution<double>> tdist;
  if (proposal == Proposal::Student)
    for (double nu : r.nu) tdist.emplace_back(nu);

  std::vector<double> logw(k);
  Vector w(n);
  for (std::size_t i = 0; i < k; ++i) {
    double corr = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (proposal == Proposal::Gaussian) {
        w[j] = normal(rng);
        corr += 0.5 * w[j] * w[j];
      } else {
        const double nu = r.nu[static_cast<std::size_t>(j)];
        // Hessian-matched scale: unit curvature at the mode
        w[j] = std::sqrt((nu + 1.0) / nu) * tdist[static_cast<std::size_t>(j)](rng);
        corr += 0.5 * (nu + 1.0) * std::log1p(w[j] * w[j] / (nu + 1.0));
      }
    }
    const Vector z = r.z_hat + chol.upper_solve(w);
    const double lp = f(as_span(z));
    logw[i] = std::isfinite(lp) ? lp - r.log_joint + corr : -std::numeric_limits<double>::infinity();
  }

  const double mx = *std::max_element(logw.begin(), logw.end());
  if (!std::isfinite(mx)) throw DegenerateWeights();
  double s1 = 0.0, s2 = 0.0;
  for (double lw : logw) {
    const double e = std::exp(lw - mx);
    s1 += e;
    s2 += e * e;
  }
  const double kd = static_cast<double>(k);
  IsRecord rec;
  rec.theta = theta;
  rec.k = k;
  rec.ess = s1 * s1 / s2;
  rec.ess_frac = rec.ess / kd;
  rec.log_mean_weight = mx + std::log(s1 / kd);
  // sd(w) / (sqrt(K) mean(w)) = sqrt(K s2 / s1^2 - 1) / sqrt(K)
  rec.log_mean_weight_sd = std::sqrt(std::max(0.0, kd * s2 / (s1 * s1) - 1.0) / kd);
  rec.loglik_alcs = r.loglik;
  rec.flags = r.flags;
  return rec;
}

double is_corrected_loglik(const HierarchicalModel& model, const Vector& theta, std::size_t k,
                           std::uint64_t seed, Proposal proposal, const IsOptions& opt) {
  const IsRecord r = is_ess(model, theta, k, proposal, seed, opt);
  return r.loglik_alcs + r.log_mean_weight;
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

DiagnosticReport ess_profile(const HierarchicalModel& model, const std::vector<Vector>& thetas,
                             std::size_t k, Proposal proposal, std::uint64_t seed,
                             const IsOptions& opt) {
  if (thetas.empty()) throw ConfigError("ess_profile needs at least one theta");
  DiagnosticReport rep;
  std::vector<double> frac;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    auto s = make_stream(seed, 0xe55, i);
    rep.records.push_back(is_ess(model, thetas[i], k, proposal, s(), opt));
    frac.push_back(rep.records.back().ess_frac);
  }
  rep.p10 = percentile(frac, 0.1);
  rep.p50 = percentile(frac, 0.5);
  rep.p90 = percentile(frac, 0.9);
  return rep;
}

json DiagnosticReport::to_json(const std::vector<std::string>& names) const {
  json recs = json::array();
  for (const auto& r : records) {
    json th = json::object();
    for (Eigen::Index i = 0; i < r.theta.size(); ++i)
      th[i < static_cast<Eigen::Index>(names.size()) ? names[static_cast<std::size_t>(i)]
                                                     : "theta" + std::to_string(i)] = r.theta[i];
    recs.push_back({{"theta", th},
                    {"ess", r.ess},
                    {"K", r.k},
                    {"ess_over_k", r.ess_frac},
                    {"log_mean_weight", r.log_mean_weight},
                    {"log_mean_weight_sd", r.log_mean_weight_sd},
                    {"loglik_alcs", r.loglik_alcs},
                    {"flags", r.flags}});
  }
  return {{"records", recs}, {"summary", {{"p10", p10}, {"p50", p50}, {"p90", p90}}}};
}

std::string DiagnosticReport::to_csv(const std::vector<std::string>& names) const {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& n : names) os << n << ',';
  os << "ess,K,ess_over_k,log_mean_weight\n";
  for (const auto& r : records) {
    for (Eigen::Index i = 0; i < r.theta.size(); ++i) os << r.theta[i] << ',';
    os << r.ess << ',' << r.k << ',' << r.ess_frac << ',' << r.log_mean_weight << '\n';
  }
  return os.str();
}

std::vector<std::size_t> systematic_resample(const std::vector<double>& weights, std::size_t n,
                                             std::mt19937_64& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0) || n == 0) throw DegenerateWeights();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double start = unif(rng) / static_cast<double>(n);
  std::vector<std::size_t> out;
  out.reserve(n);
  double cum = weights[0] / total;
  std::size_t i = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const double target = start + static_cast<double>(s) / static_cast<double>(n);
    while (cum < target && i + 1 < weights.size()) cum += weights[++i] / total;
    out.push_back(i);
  }
  return out;
}

}  // namespace alcs
