#include "alcs/experiments/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "alcs/errors.hpp"
#include "alcs/models/zoo.hpp"
#include "alcs/sampler/rng.hpp"

namespace alcs {

namespace {

void say(const std::function<void(const std::string&)>& log, const std::string& s) {
  if (log) log(s);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double mean_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

LikelihoodSettings mode(LikelihoodMode m) {
  LikelihoodSettings s;
  s.mode = m;
  return s;
}

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j);
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    i = j + 1;
  }
  return r;
}

json gap_json(const GapStats& g) {
  return {{"logz_a", g.logz_a},         {"logz_b", g.logz_b},   {"sigma_a", g.sigma_a},
          {"sigma_b", g.sigma_b},       {"mean_gap", g.mean_gap}, {"sd_gap", g.sd_gap},
          {"sigma_combined", g.sigma_comb}};
}

}  // namespace

bool Report::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

ReportRow& Report::add(std::string name, double observed, double paper, double lo, double hi,
                       std::string note) {
  ReportRow r;
  r.name = std::move(name);
  r.observed = observed;
  r.paper = paper;
  r.lo = lo;
  r.hi = hi;
  r.pass = std::isfinite(observed) && observed >= lo && observed <= hi;
  r.note = std::move(note);
  rows.push_back(std::move(r));
  return rows.back();
}

json Report::to_json() const {
  json rs = json::array();
  for (const auto& r : rows)
    rs.push_back({{"name", r.name},
                  {"observed", num(r.observed)},
                  {"paper", num(r.paper)},
                  {"accept", {num(r.lo), num(r.hi)}},
                  {"result", r.pass ? "PASS" : "FAIL"},
                  {"note", r.note}});
  return {{"artefact", artefact}, {"settings", settings}, {"rows", rs},
          {"result", pass() ? "PASS" : "FAIL"}, {"data", data}};
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << artefact << "\n";
  for (const auto& r : rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-4s %-40s observed %+.4f  paper %s  accept [%s, %s]",
                  r.pass ? "PASS" : "FAIL", r.name.c_str(), r.observed,
                  std::isfinite(r.paper) ? fmt("%+.2f", r.paper).c_str() : "  -  ",
                  std::isfinite(r.lo) ? fmt("%.3g", r.lo).c_str() : "-inf",
                  std::isfinite(r.hi) ? fmt("%.3g", r.hi).c_str() : "inf");
    os << buf;
    if (!r.note.empty()) os << "  (" << r.note << ")";
    os << "\n";
  }
  return os.str();
}

NsSettings recipe_ns(std::size_t live, std::uint64_t seed, int threads) {
  NsSettings s;
  s.live = live;
  s.batch = std::max<std::size_t>(1, live / 5);
  s.seed = seed;
  s.threads = threads;
  return s;
}

std::vector<NsResult> seeded_runs(ModelPtr model, const LikelihoodSettings& ls, std::size_t live,
                                  const std::vector<std::uint64_t>& seeds, int threads,
                                  const std::function<void(const std::string&)>& log) {
  const auto like = make_likelihood(model, ls);
  std::vector<NsResult> out;
  for (auto seed : seeds) {
    out.push_back(run(*like, recipe_ns(live, seed, threads)));
    say(log, model->name() + " seed " + std::to_string(seed) + ": " + to_string(ls.mode) + " logZ " +
                 fmt("%.4f", out.back().logz) + " +- " + fmt("%.4f", out.back().sigma));
  }
  return out;
}

GapStats gap_stats(const std::vector<NsResult>& a, const std::vector<NsResult>& b) {
  if (a.size() != b.size() || a.empty()) throw ConfigError("gap_stats needs paired, non-empty runs");
  GapStats g;
  std::vector<double> gaps;
  for (std::size_t i = 0; i < a.size(); ++i) {
    g.logz_a.push_back(a[i].logz);
    g.logz_b.push_back(b[i].logz);
    g.sigma_a.push_back(a[i].sigma);
    g.sigma_b.push_back(b[i].sigma);
    gaps.push_back(a[i].logz - b[i].logz);
  }
  g.mean_gap = mean(gaps);
  g.sd_gap = sd(gaps);
  g.sigma_comb = std::sqrt(mean_sq(g.sigma_a) + mean_sq(g.sigma_b));
  return g;
}

GapStats evidence_gap(ModelPtr model, const LikelihoodSettings& a, const LikelihoodSettings& b,
                      std::size_t live, const std::vector<std::uint64_t>& seeds, int threads,
                      std::vector<NsResult>* runs_a,
                      const std::function<void(const std::string&)>& log) {
  auto ra = seeded_runs(model, a, live, seeds, threads, log);
  const auto rb = seeded_runs(model, b, live, seeds, threads, log);
  const GapStats g = gap_stats(ra, rb);
  if (runs_a) *runs_a = std::move(ra);
  return g;
}

std::vector<Vector> posterior_thetas(const NsResult& run, std::size_t m, std::uint64_t seed) {
  if (run.posterior.empty()) throw ConfigError("run has no posterior samples");
  std::vector<double> w;
  for (const auto& p : run.posterior) w.push_back(p.weight);
  auto rng = make_stream(seed, 0x7e7a, 0);
  std::vector<Vector> out;
  for (auto i : systematic_resample(w, m, rng)) out.push_back(run.posterior[i].params);
  return out;
}

DiagnosticReport posterior_ess(const HierarchicalModel& model, const NsResult& run, std::size_t m,
                               std::size_t k, Proposal proposal, std::uint64_t seed) {
  return ess_profile(model, posterior_thetas(run, m, seed), k, proposal, seed);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("spearman needs paired samples");
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = mean(rx), my = mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxx > 0.0 && syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

Report reproduce_t1(const RecipeOptions& opt) {
  Report rep;
  rep.artefact = "t1";
  rep.settings = {{"live", opt.live}, {"seeds", opt.seeds}, {"is_k", opt.is_k},
                  {"is_m", opt.is_m}, {"is_seed", opt.is_seed}};

  struct Case {
    std::string model;
    json params;
    double paper_gap;
  };
  const std::vector<Case> cases = {{"eight_schools", json::object(), 0.08},
                                   {"radon", {{"counties", 20}}, 0.00},
                                   {"brownian", {{"steps", 50}}, 0.06}};
  for (const auto& c : cases) {
    auto model = make_model(c.model, c.params);
    std::vector<NsResult> runs;
    const GapStats g = evidence_gap(model, mode(LikelihoodMode::Gaussian),
                                    mode(LikelihoodMode::ExactReference), opt.live, opt.seeds,
                                    opt.threads, &runs, opt.log);
    const double bound = std::min(0.2, 3.0 * g.sigma_comb);
    rep.add(c.model + " gap (gaussian - exact)", g.mean_gap, c.paper_gap, -bound, bound,
            "sigma_comb " + fmt("%.3f", g.sigma_comb) + ", cross-seed sd " + fmt("%.3f", g.sd_gap));
    const auto d = posterior_ess(*model, runs.front(), opt.is_m, opt.is_k, Proposal::Gaussian,
                                 opt.is_seed);
    rep.add(c.model + " median ESS/K", d.p50, 1.00, 0.999, std::numeric_limits<double>::infinity());
    rep.data[c.model] = {{"params", c.params}, {"gap", gap_json(g)}, {"ess_p10", d.p10},
                         {"ess_p50", d.p50}, {"ess_p90", d.p90}};
    say(opt.log, c.model + " median ESS/K " + fmt("%.5f", d.p50));
  }

  // No closed form: only the diagnostic is reproduced here.
  auto lgcp = make_model("lgcp", json::object());
  auto like = make_likelihood(lgcp, mode(LikelihoodMode::Gaussian));
  const NsResult r = run(*like, recipe_ns(opt.live, opt.seeds.front(), opt.threads));
  say(opt.log, "lgcp logZ " + fmt("%.4f", r.logz));
  const auto d = posterior_ess(*lgcp, r, opt.is_m, opt.is_k, Proposal::Gaussian, opt.is_seed);
  rep.add("lgcp median ESS/K", d.p50, 0.71, 0.5, 0.9);
  rep.data["lgcp"] = {{"logz", r.logz}, {"sigma", r.sigma}, {"ess_p10", d.p10},
                      {"ess_p50", d.p50}, {"ess_p90", d.p90}};
  say(opt.log, "lgcp median ESS/K " + fmt("%.4f", d.p50));
  return rep;
}

Report reproduce_t3(const RecipeOptions& opt) {
  Report rep;
  rep.artefact = "t3";
  rep.settings = {{"objects", 50}, {"live", opt.live}, {"seeds", opt.seeds}, {"is_k", opt.is_k},
                  {"is_m", opt.is_m}, {"is_seed", opt.is_seed}};
  auto model = make_model("student_hier", {{"objects", 50}});
  const auto ref = mode(LikelihoodMode::ExactReference);

  // One reference run per seed serves both gaps.
  const auto ref_runs = seeded_runs(model, ref, opt.live, opt.seeds, opt.threads, opt.log);
  const auto gauss_runs =
      seeded_runs(model, mode(LikelihoodMode::Gaussian), opt.live, opt.seeds, opt.threads, opt.log);
  const auto student_runs =
      seeded_runs(model, mode(LikelihoodMode::Student), opt.live, opt.seeds, opt.threads, opt.log);
  const GapStats g = gap_stats(gauss_runs, ref_runs);
  const GapStats s = gap_stats(student_runs, ref_runs);
  rep.add("N=50 delta gaussian", g.mean_gap, -0.97, -1.5, -0.5,
          "cross-seed sd " + fmt("%.3f", g.sd_gap));
  rep.add("N=50 delta student", s.mean_gap, -0.10, -0.4, 0.4,
          "cross-seed sd " + fmt("%.3f", s.sd_gap));

  // Both proposals at the same theta draws (from the Gaussian-mode posterior).
  const auto thetas = posterior_thetas(gauss_runs.front(), opt.is_m, opt.is_seed);
  const auto dg = ess_profile(*model, thetas, opt.is_k, Proposal::Gaussian, opt.is_seed);
  const auto ds = ess_profile(*model, thetas, opt.is_k, Proposal::Student, opt.is_seed);
  rep.add("N=50 median ESS/K gaussian", dg.p50, 0.38, 0.0, 1.0);
  rep.add("N=50 median ESS/K student", ds.p50, 0.49, 0.0, 1.0);
  rep.add("student minus gaussian median ESS/K", ds.p50 - dg.p50, 0.49 - 0.38, 1e-300,
          std::numeric_limits<double>::infinity(), "must be positive");
  rep.data = {{"gaussian", gap_json(g)}, {"student", gap_json(s)},
              {"ess_gaussian", {{"p10", dg.p10}, {"p50", dg.p50}, {"p90", dg.p90}}},
              {"ess_student", {{"p10", ds.p10}, {"p50", ds.p50}, {"p90", ds.p90}}}};
  return rep;
}

Report reproduce_funnel(const RecipeOptions& opt) {
  Report rep;
  rep.artefact = "funnel";
  rep.settings = {{"latents", 10}, {"live", opt.live}, {"seeds", opt.seeds},
                  {"is_k", opt.is_k}, {"is_seed", opt.is_seed}};
  auto model = make_model("tanh_funnel", json::object());

  const GapStats g = evidence_gap(model, mode(LikelihoodMode::Gaussian),
                                  mode(LikelihoodMode::ExactReference), opt.live, opt.seeds,
                                  opt.threads, nullptr, opt.log);
  rep.add("evidence gap (gaussian - quadrature)", g.mean_gap, -0.74, -0.74 - 0.45, -0.74 + 0.45,
          "cross-seed sd " + fmt("%.3f", g.sd_gap));

  auto alcs_at = [&](double t) {
    return collapsed_loglik_gaussian(*model->bind(std::span<const double>(&t, 1))).loglik;
  };
  auto exact_at = [&](double t) { return model->exact_marginal(std::span<const double>(&t, 1)); };

  rep.add("pointwise |error| at theta=-1", std::abs(alcs_at(-1.0) - exact_at(-1.0)), 0.0, 0.0, 0.05);

  std::vector<double> ts, errs;
  for (int i = 0; i <= 12; ++i) {
    const double t = 0.25 * i;
    ts.push_back(t);
    errs.push_back(exact_at(t) - alcs_at(t));
  }
  rep.add("spearman(theta, error) on [0, 3]", spearman(ts, errs), 1.0, 0.9, 1.0);

  auto ess_at = [&](double t) {
    Vector th = Vector::Constant(1, t);
    return is_ess(*model, th, opt.is_k, Proposal::Gaussian, opt.is_seed).ess_frac;
  };
  rep.add("ESS/K at theta=-1", ess_at(-1.0), std::numeric_limits<double>::quiet_NaN(), 0.9, 1.0);
  rep.add("ESS/K at theta=3", ess_at(3.0), std::numeric_limits<double>::quiet_NaN(), 0.0, 0.1);

  // The 60-point profile behind the failure-map figure.
  json grid = json::array();
  for (int i = 0; i < 60; ++i) {
    const double t = -3.0 + 7.0 * i / 59.0;
    const double a = alcs_at(t), e = exact_at(t);
    grid.push_back({{"theta", t}, {"loglik_alcs", a}, {"loglik_exact", e}, {"error", a - e},
                    {"ess_over_k", ess_at(t)}});
  }
  rep.data = {{"gap", gap_json(g)}, {"grid", grid}};
  return rep;
}

Report reproduce(const std::string& table, const RecipeOptions& opt) {
  if (table == "t1") return reproduce_t1(opt);
  if (table == "t3") return reproduce_t3(opt);
  if (table == "funnel") return reproduce_funnel(opt);
  throw ConfigError("unknown table '" + table + "' (expected t1, t3 or funnel)");
}

}  // namespace alcs
