#include "alcs/sampler/nested.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "alcs/errors.hpp"
#include "alcs/sampler/rng.hpp"

namespace alcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2 = 0.69314718055994530942;

// log(e^a + e^b)
double logaddexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// log(e^a - e^b), a >= b
double logsubexp(double a, double b) {
  if (b == -kInf) return a;
  return a + std::log(-std::expm1(b - a));
}

bool by_logl(const LivePoint& a, const LivePoint& b) {
  return a.logl < b.logl || (a.logl == b.logl && a.tie() < b.tie());
}

// Trapezoid segment between consecutive deaths.
double segment(double l_prev, double l, double logx_prev, double logx) {
  return logaddexp(l_prev, l) - kLog2 + logsubexp(logx_prev, logx);
}

double remainder(double logx, const std::vector<double>& live_logl) {
  if (live_logl.empty()) return -kInf;
  return logx + logsumexp(live_logl) - std::log(static_cast<double>(live_logl.size()));
}

// Run f(i) for i in [0, n) on up to `threads` workers.
template <class F>
void parallel_for(std::size_t n, int threads, F f) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

VolumeModel parse_volume_model(const std::string& s) {
  if (s == "order-statistics") return VolumeModel::OrderStatistics;
  if (s == "sequential") return VolumeModel::Sequential;
  throw ConfigError("unknown volume model '" + s + "'");
}

std::string to_string(VolumeModel v) {
  return v == VolumeModel::OrderStatistics ? "order-statistics" : "sequential";
}

void NsSettings::validate() const {
  if (live < 2) throw ConfigError("need at least 2 live points");
  if (batch < 1 || 2 * batch > live) throw ConfigError("batch k must satisfy 1 <= k and 2k <= m");
  if (slice_steps < 1) throw ConfigError("slice steps must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (!(slice_width > 0.0)) throw ConfigError("slice width must be positive");
  if (slice_retries < 0) throw ConfigError("slice retries must be >= 0");
  if (!std::isfinite(termination)) throw ConfigError("termination threshold must be finite");
}

double logsumexp(const std::vector<double>& v) {
  double m = -kInf;
  for (double x : v) m = std::max(m, x);
  if (m == -kInf || m == kInf) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

NsState ns_init(const Likelihood& like, const NsSettings& s) {
  s.validate();
  NsState st;
  st.live.resize(s.live);
  const std::size_t d = like.dim();
  // Sequential so that "first evaluation" is well defined for fiducial warm starts.
  for (std::size_t i = 0; i < s.live; ++i) {
    auto rng = make_stream(s.seed, 0, i);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    LivePoint& p = st.live[i];
    p.u.resize(d + 1);
    for (auto& x : p.u) {
      do x = unif(rng);
      while (x <= 0.0);
    }
    const auto uu = std::span<const double>(p.u).first(d);
    const Evaluation e = like.evaluate(uu, nullptr);
    ++st.evaluations;
    p.logl = e.logl;
    p.flags = e.flags;
    p.cache = e.cache;
    p.params = like.params(uu);
  }
  if (std::all_of(st.live.begin(), st.live.end(), [](const LivePoint& p) { return p.logl == -kInf; }))
    throw DegeneratePrior("every initial live point has zero likelihood");
  std::sort(st.live.begin(), st.live.end(), by_logl);
  return st;
}

void ns_step(NsState& st, const Likelihood& like, const NsSettings& s) {
  const std::size_t m = st.live.size();
  const std::size_t k = s.batch;
  ++st.iteration;

  for (std::size_t j = 0; j < k; ++j) {
    const LivePoint& p = st.live[j];
    const std::size_t n = m - j;
    const double shrink = s.volume == VolumeModel::OrderStatistics ? 1.0 / static_cast<double>(n)
                                                                   : 1.0 / static_cast<double>(m);
    const double logx_new = st.logx - shrink;
    const double l_prev = st.dead.empty() ? p.logl : st.dead.back().logl;
    if (p.logl > -kInf) st.logz = logaddexp(st.logz, segment(l_prev, p.logl, st.logx, logx_new));
    st.dead.push_back({p.params, p.logl, logx_new, p.flags,
                       s.volume == VolumeModel::OrderStatistics ? n : m});
    st.logx = logx_new;
  }

  const double thr_l = st.live[k - 1].logl;
  const double thr_t = st.live[k - 1].tie();
  std::vector<LivePoint> survivors(std::make_move_iterator(st.live.begin() + static_cast<long>(k)),
                                   std::make_move_iterator(st.live.end()));
  const Matrix factor = live_covariance_factor(survivors);
  SliceSettings ss;
  ss.steps = s.slice_steps;
  ss.retries = s.slice_retries;
  ss.width = s.slice_width;

  std::vector<LivePoint> fresh(k);
  std::vector<std::size_t> evals(k, 0);
  parallel_for(k, s.threads, [&](std::size_t c) {
    auto rng = make_stream(s.seed, st.iteration, c);
    std::uniform_int_distribution<std::size_t> pick(0, survivors.size() - 1);
    const LivePoint& start = survivors[pick(rng)];
    fresh[c] = slice_sample_constrained(like, start, thr_l, thr_t, factor, ss, rng, evals[c]);
  });
  for (std::size_t c = 0; c < k; ++c) st.evaluations += evals[c];

  st.live = std::move(survivors);
  for (auto& p : fresh) st.live.push_back(std::move(p));
  std::sort(st.live.begin(), st.live.end(), by_logl);
}

bool terminate(const NsState& st, double threshold) {
  std::vector<double> l;
  l.reserve(st.live.size());
  for (const auto& p : st.live) l.push_back(p.logl);
  const double live = remainder(st.logx, l);
  if (live == -kInf) return true;
  if (st.logz == -kInf) return false;
  return live - st.logz < threshold;
}

double log_evidence(const std::vector<DeadPoint>& dead, const std::vector<double>& live_logl) {
  double logz = -kInf, logx = 0.0;
  for (std::size_t i = 0; i < dead.size(); ++i) {
    const double l_prev = i == 0 ? dead[0].logl : dead[i - 1].logl;
    if (dead[i].logl > -kInf) logz = logaddexp(logz, segment(l_prev, dead[i].logl, logx, dead[i].logx));
    logx = dead[i].logx;
  }
  return logaddexp(logz, remainder(logx, live_logl));
}

double bootstrap_sigma(const std::vector<DeadPoint>& dead, const std::vector<double>& live_logl,
                       std::size_t n_boot, std::uint64_t seed) {
  if (dead.empty() || n_boot < 2) return 0.0;
  auto rng = make_stream(seed, 0xb007, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<DeadPoint> redraw = dead;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t b = 0; b < n_boot; ++b) {
    double logx = 0.0;
    for (auto& p : redraw) {
      double u;
      do u = unif(rng);
      while (u <= 0.0);
      logx += std::log(u) / static_cast<double>(p.live);
      p.logx = logx;
    }
    const double z = log_evidence(redraw, live_logl);
    sum += z;
    sum2 += z * z;
  }
  const double n = static_cast<double>(n_boot);
  const double mean = sum / n;
  return std::sqrt(std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)));
}

NsResult ns_finish(const NsState& st, const NsSettings& s, const Likelihood& like) {
  NsResult r;
  r.names = like.names();
  r.dead = st.dead;
  r.n_dead = st.dead.size();
  r.iterations = st.iteration;
  r.evaluations = st.evaluations;
  r.final_logx = st.logx;
  for (const auto& p : st.live) r.live_logl.push_back(p.logl);
  r.logz = log_evidence(st.dead, r.live_logl);
  r.sigma = bootstrap_sigma(st.dead, r.live_logl, s.bootstrap, s.seed);

  // Posterior weights: trapezoid weight per dead point, X_N / m per live point.
  std::vector<double> logw;
  double logx_prev = 0.0;
  const std::size_t n = st.dead.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double x_next = i + 1 < n ? st.dead[i + 1].logx : st.logx;
    // 1/2 (X_{i-1} - X_{i+1}); the first point also carries the L_0 := L_1 half segment
    double lw = i + 1 < n ? logsubexp(logx_prev, x_next) - kLog2
                          : logsubexp(logx_prev, st.dead[i].logx) - kLog2;
    if (i == 0) lw = logaddexp(lw, logsubexp(0.0, st.dead[0].logx) - kLog2);
    logw.push_back(lw + st.dead[i].logl);
    logx_prev = st.dead[i].logx;
  }
  const double live_w = st.logx - std::log(static_cast<double>(st.live.size()));
  for (const auto& p : st.live) logw.push_back(live_w + p.logl);
  const double norm = logsumexp(logw);

  std::size_t flagged = 0;
  double dkl = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    PosteriorSample ps;
    if (i < n) {
      const DeadPoint& d = st.dead[i];
      ps.params = d.params;
      ps.logl = d.logl;
      ps.flags = d.flags;
    } else {
      const LivePoint& p = st.live[i - n];
      ps.params = p.params;
      ps.logl = p.logl;
      ps.flags = p.flags;
      ps.cache = p.cache;
    }
    ps.weight = std::exp(logw[i] - norm);
    if (ps.weight > 0.0) dkl += ps.weight * (ps.logl - r.logz);
    if (ps.flags != 0) ++flagged;
    r.posterior.push_back(std::move(ps));
  }
  r.dkl = dkl;
  r.flagged_fraction = logw.empty() ? 0.0 : static_cast<double>(flagged) / static_cast<double>(logw.size());
  return r;
}

NsResult run(const Likelihood& like, const NsSettings& s, const NsProgress& progress) {
  NsState st = ns_init(like, s);
  while (st.iteration < s.max_iterations) {
    ns_step(st, like, s);
    if (progress) progress(st);
    if (terminate(st, s.termination)) break;
  }
  return ns_finish(st, s, like);
}

}  // namespace alcs
