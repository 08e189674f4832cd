#include "alcs/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>

#include "alcs/autodiff/derivatives.hpp"
#include "alcs/diagnostics/recovery.hpp"
#include "alcs/errors.hpp"
#include "alcs/experiments/recipes.hpp"
#include "alcs/models/zoo.hpp"
#include "alcs/sampler/rng.hpp"

namespace fs = std::filesystem;

namespace alcs {

namespace {

std::string g17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

fs::path out_dir(const RunConfig& cfg) {
  fs::path p(cfg.output);
  fs::create_directories(p);
  return p;
}

json provenance(const RunConfig& cfg) {
  return {{"schema_version", kSchemaVersion}, {"config", cfg.to_json()}};
}

// CSV provenance lives in leading '#' lines.
std::string csv_preamble(const RunConfig& cfg) {
  return "# schema_version: " + std::to_string(kSchemaVersion) + "\n# config: " +
         cfg.to_json().dump() + "\n";
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  out << s;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw NotFound("missing run artefact '" + p.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + p.string() + "' is not valid JSON: " + e.what());
  }
}

ModelPtr build_model(const RunConfig& cfg) {
  if (cfg.data.empty()) return make_model(cfg.model, cfg.model_params);
  const json d = read_json(cfg.data);
  return make_model(cfg.model, cfg.model_params, SyntheticDataset::from_json(d));
}

std::string posterior_csv(const RunConfig& cfg, const NsResult& r) {
  std::ostringstream os;
  os << csv_preamble(cfg);
  for (const auto& n : r.names) os << n << ',';
  os << "logl,weight,flags\n";
  for (const auto& p : r.posterior) {
    for (Eigen::Index i = 0; i < p.params.size(); ++i) os << g17(p.params[i]) << ',';
    os << g17(p.logl) << ',' << g17(p.weight) << ',' << p.flags << '\n';
  }
  return os.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

// Rebuilds the posterior part of a run from posterior.csv.
NsResult read_posterior(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw NotFound("missing run artefact '" + p.string() + "'");
  NsResult r;
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    if (header.empty()) {
      header = cells;
      if (header.size() < 3 || header[header.size() - 3] != "logl")
        throw ConfigError("'" + p.string() + "' has an unexpected header");
      r.names.assign(header.begin(), header.end() - 3);
      continue;
    }
    if (cells.size() != header.size())
      throw ConfigError("'" + p.string() + "' has a malformed row");
    PosteriorSample s;
    const std::size_t d = r.names.size();
    s.params.resize(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) s.params[static_cast<Eigen::Index>(i)] = std::strtod(cells[i].c_str(), nullptr);
    s.logl = std::strtod(cells[d].c_str(), nullptr);
    s.weight = std::strtod(cells[d + 1].c_str(), nullptr);
    s.flags = static_cast<std::uint32_t>(std::stoul(cells[d + 2]));
    r.posterior.push_back(std::move(s));
  }
  if (r.posterior.empty()) throw ConfigError("'" + p.string() + "' holds no samples");
  return r;
}

void check_run_matches(const RunConfig& cfg) {
  const json s = read_json(fs::path(cfg.output) / "summary.json");
  const std::string model = s.at("config").at("model").at("name").get<std::string>();
  if (model != cfg.model)
    throw ConfigError("run in '" + cfg.output + "' is for model '" + model + "', config says '" +
                      cfg.model + "'");
}

NsResult sample(const RunConfig& cfg, const ModelPtr& model, std::ostream& log) {
  const auto like = make_likelihood(model, cfg.likelihood);
  auto last = std::chrono::steady_clock::now();
  return run(*like, cfg.sampler, [&](const NsState& st) {
    const auto now = std::chrono::steady_clock::now();
    if (now - last < std::chrono::seconds(5)) return;
    last = now;
    log << "iteration " << st.iteration << "  logZ " << st.logz << "  logX " << st.logx
        << "  evaluations " << st.evaluations << std::endl;
  });
}

void write_run(const RunConfig& cfg, const NsResult& r) {
  const fs::path dir = out_dir(cfg);
  json summary = provenance(cfg);
  summary["model"] = cfg.model;
  summary["mode"] = to_string(cfg.likelihood.mode);
  summary["names"] = r.names;
  summary["logZ"] = r.logz;
  summary["sigma"] = r.sigma;
  summary["N_dead"] = r.n_dead;
  summary["D_KL"] = r.dkl;
  summary["iterations"] = r.iterations;
  summary["evaluations"] = r.evaluations;
  summary["flagged_fraction"] = r.flagged_fraction;
  summary["final_logX"] = r.final_logx;
  write_json(dir / "summary.json", summary);
  write_json(dir / "config.json", cfg.to_json());

  std::ostringstream dead;
  dead << provenance(cfg).dump() << '\n';
  for (const auto& d : r.dead) {
    json row = {{"theta", std::vector<double>(d.params.data(), d.params.data() + d.params.size())},
                {"logl", d.logl},
                {"logx", d.logx},
                {"flags", d.flags}};
    dead << row.dump() << '\n';
  }
  write_text(dir / "deadpoints.jsonl", dead.str());
  write_text(dir / "posterior.csv", posterior_csv(cfg, r));
}

// Synthetic chain log density: Poisson observations on a stationary AR(1).
ad::DiffFunction chain_model(std::size_t n, std::uint64_t seed) {
  auto rng = make_stream(seed, 0xbe, n);
  std::poisson_distribution<int> pois(3.0);
  auto y = std::make_shared<std::vector<double>>(n);
  for (auto& v : *y) v = pois(rng);
  return ad::DiffFunction(n, [y](auto z) {
    using T = typename decltype(z)::value_type;
    const double rho = 0.9, s2 = 0.25;
    T acc = -0.5 * (1.0 - rho * rho) * z[0] * z[0] / s2;
    for (std::size_t i = 0; i < z.size(); ++i) {
      acc += (*y)[i] * z[i] - ad::exp(z[i]);
      if (i > 0) {
        const T d = z[i] - rho * z[i - 1];
        acc -= 0.5 * d * d / s2;
      }
    }
    return acc;
  });
}

}  // namespace

int cmd_run(const RunConfig& cfg, std::ostream& log) {
  const ModelPtr model = build_model(cfg);
  const NsResult r = sample(cfg, model, log);
  write_run(cfg, r);
  log << "logZ = " << r.logz << " +/- " << r.sigma << "  (N_dead " << r.n_dead << ", D_KL "
      << r.dkl << ")" << std::endl;
  return kExitOk;
}

int cmd_diagnose(const RunConfig& cfg, bool fresh, std::ostream& log) {
  const ModelPtr model = build_model(cfg);
  std::vector<Vector> thetas;
  if (cfg.grid) {
    if (model->theta_dim() != 1) throw ConfigError("diagnostics.grid needs a one-dimensional theta");
    for (std::size_t i = 0; i < cfg.grid->n; ++i)
      thetas.push_back(Vector::Constant(
          1, cfg.grid->lo + (cfg.grid->hi - cfg.grid->lo) * static_cast<double>(i) /
                                static_cast<double>(cfg.grid->n - 1)));
  } else {
    NsResult r;
    if (fresh) {
      r = sample(cfg, model, log);
      write_run(cfg, r);
    } else {
      check_run_matches(cfg);
      r = read_posterior(fs::path(cfg.output) / "posterior.csv");
    }
    const auto dt = static_cast<Eigen::Index>(model->theta_dim());
    for (auto& t : posterior_thetas(r, cfg.is_m, cfg.seed)) thetas.push_back(t.head(dt));
  }
  IsOptions opt;
  opt.collapse = cfg.likelihood.collapse;
  opt.student = cfg.likelihood.student;
  const DiagnosticReport rep = ess_profile(*model, thetas, cfg.is_k, cfg.proposal, cfg.seed, opt);

  const fs::path dir = out_dir(cfg);
  json j = provenance(cfg);
  j["model"] = cfg.model;
  j["proposal"] = to_string(cfg.proposal);
  j["K"] = cfg.is_k;
  j["source"] = cfg.grid ? "grid" : "posterior";
  j.update(rep.to_json(model->theta_names()));
  write_json(dir / "diagnostics.json", j);
  write_text(dir / "ess_profile.csv", csv_preamble(cfg) + rep.to_csv(model->theta_names()));
  log << "median ESS/K " << rep.p50 << "  (p10 " << rep.p10 << ", p90 " << rep.p90 << ", "
      << thetas.size() << " theta)" << std::endl;
  return kExitOk;
}

int cmd_recover(const RunConfig& cfg, std::ostream& log) {
  const ModelPtr model = build_model(cfg);
  check_run_matches(cfg);
  const NsResult r = read_posterior(fs::path(cfg.output) / "posterior.csv");
  const auto draws =
      recover_posterior(r, *model, cfg.recover_samples, cfg.seed, cfg.likelihood.collapse);

  std::ostringstream os;
  os << csv_preamble(cfg);
  for (const auto& n : model->theta_names()) os << n << ',';
  for (std::size_t j = 0; j < model->latent_dim(); ++j) os << 'z' << j << ',';
  os << "flags\n";
  for (const auto& d : draws) {
    for (Eigen::Index i = 0; i < d.theta.size(); ++i) os << g17(d.theta[i]) << ',';
    for (Eigen::Index i = 0; i < d.z.size(); ++i) os << g17(d.z[i]) << ',';
    os << d.flags << '\n';
  }
  write_text(out_dir(cfg) / "joint_samples.csv", os.str());
  log << "wrote " << draws.size() << " joint samples" << std::endl;
  return kExitOk;
}

int cmd_bench_hessian(const RunConfig& cfg, std::ostream& log) {
  using clock = std::chrono::steady_clock;
  std::ostringstream os;
  os << csv_preamble(cfg) << "d_z,t_dense,t_tri,max_deviation,logdet_deviation\n";
  for (const std::size_t n : cfg.bench_sizes) {
    const auto f = chain_model(n, cfg.seed);
    auto rng = make_stream(cfg.seed, 0xbf, n);
    std::normal_distribution<double> normal(0.0, 0.3);
    std::vector<double> z(n);
    for (auto& v : z) v = 1.0 + normal(rng);

    double t_dense = INFINITY, t_tri = INFINITY, ld_dense = 0.0, ld_tri = 0.0;
    Matrix hd;
    StructuredMatrix ht = StructuredMatrix::identity(LatentStructure::tridiagonal(n));
    for (int rep = 0; rep < cfg.bench_repeats; ++rep) {
      auto t0 = clock::now();
      hd = -ad::hessian_dense(f, z);
      Eigen::LLT<Matrix> llt(hd);
      if (llt.info() != Eigen::Success) throw NumericalError("dense Hessian is not positive definite");
      ld_dense = llt.matrixLLT().diagonal().array().log().sum();
      t_dense = std::min(t_dense, std::chrono::duration<double>(clock::now() - t0).count());

      t0 = clock::now();
      ht = latent_hessian(f, z, LatentStructure::tridiagonal(n)).scaled(-1.0);
      ld_tri = half_logdet(ht);
      t_tri = std::min(t_tri, std::chrono::duration<double>(clock::now() - t0).count());
    }
    const double dev = (hd - ht.to_dense()).cwiseAbs().maxCoeff();
    const double ld_dev = std::abs(ld_dense - ld_tri);
    os << n << ',' << g17(t_dense) << ',' << g17(t_tri) << ',' << g17(dev) << ',' << g17(ld_dev)
       << '\n';
    log << "d_z " << n << "  dense " << t_dense << " s  tridiagonal " << t_tri
        << " s  max deviation " << dev << std::endl;
    if (dev > 1e-8) throw NumericalError("tridiagonal Hessian deviates from dense by " + g17(dev));
  }
  write_text(out_dir(cfg) / "bench.csv", os.str());
  return kExitOk;
}

int cmd_reproduce(const RunConfig& cfg, const std::string& table, std::ostream& log) {
  RecipeOptions opt;
  opt.live = cfg.reproduce_live;
  opt.seeds = cfg.reproduce_seeds;
  opt.threads = cfg.sampler.threads;
  opt.is_k = cfg.is_k;
  opt.is_m = cfg.is_m;
  opt.is_seed = cfg.seed;
  opt.log = [&](const std::string& s) { log << s << std::endl; };
  const Report rep = reproduce(table, opt);
  json j = provenance(cfg);
  j.update(rep.to_json());
  write_json(out_dir(cfg) / "report.json", j);
  log << rep.to_text();
  return rep.pass() ? kExitOk : kExitReproductionFail;
}

int cmd_data(const RunConfig& cfg, std::ostream& log) {
  const ModelPtr model = build_model(cfg);
  json j = model->dataset().to_json();
  j["schema_version"] = kSchemaVersion;
  j["config"] = cfg.to_json();
  write_json(out_dir(cfg) / "dataset.json", j);
  log << "wrote dataset for " << model->name() << std::endl;
  return kExitOk;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  auto report = [&](const char* kind, const std::string& msg, int code) {
    err << json{{"error", kind}, {"message", msg}, {"exit_code", code}}.dump() << std::endl;
    return code;
  };
  try {
    return body();
  } catch (const NotFound& e) {
    return report("not_found", e.what(), kExitConfig);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::Config: return report("config", e.what(), kExitConfig);
      case ErrorKind::Model: return report("model", e.what(), kExitModel);
      case ErrorKind::Numerical: return report("numerical", e.what(), kExitNumerical);
    }
  } catch (const json::exception& e) {
    return report("config", e.what(), kExitConfig);
  } catch (const fs::filesystem_error& e) {
    return report("config", e.what(), kExitConfig);
  } catch (const std::exception& e) {
    return report("internal", e.what(), 1);
  }
  return 1;
}

}  // namespace alcs
