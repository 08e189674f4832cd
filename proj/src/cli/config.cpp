#include "alcs/cli/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>

#include "alcs/errors.hpp"

namespace alcs {

namespace {

std::string estimator_name(NuEstimator e) {
  switch (e) {
    case NuEstimator::TaylorMatched: return "taylor-matched";
    case NuEstimator::AsWritten: return "as-written";
    case NuEstimator::Fixed: return "fixed";
  }
  return "taylor-matched";
}

NuEstimator parse_estimator(const std::string& s) {
  if (s == "taylor-matched") return NuEstimator::TaylorMatched;
  if (s == "as-written") return NuEstimator::AsWritten;
  if (s == "fixed") return NuEstimator::Fixed;
  throw ConfigError("unknown nu estimator '" + s + "'");
}

// Strict reader for one JSON object section.
class Section {
 public:
  Section(std::string path, const json& j) : path_(std::move(path)), j_(j) {
    if (!j_.is_object()) throw ConfigError(label() + " must be a JSON object");
  }

  template <class T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(label(key) + " has the wrong type");
    }
  }

  const json* sub(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string label(const char* key = nullptr) const {
    std::string p = path_.empty() ? "config" : path_;
    return key ? (path_.empty() ? std::string(key) : path_ + "." + key) : p;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k))
        throw ConfigError("unknown key '" + (path_.empty() ? k : path_ + "." + k) + "'");
  }

 private:
  std::string path_;
  const json& j_;
  std::set<std::string> seen_;
};

template <class T>
void require_positive(const std::string& what, T v) {
  if (!(v > 0)) throw ConfigError(what + " must be positive");
}

}  // namespace

json RunConfig::to_json() const {
  json j;
  j["model"] = {{"name", model}, {"params", model_params}};
  if (!data.empty()) j["model"]["data"] = data;
  j["mode"] = to_string(likelihood.mode);
  j["warm_start"] = to_string(likelihood.warm);
  j["nu_estimator"] = estimator_name(likelihood.student.estimator);
  j["sampler"] = {{"live", sampler.live},
                  {"batch", sampler.batch},
                  {"slice_steps", sampler.slice_steps},
                  {"termination", sampler.termination},
                  {"threads", sampler.threads},
                  {"volume", to_string(sampler.volume)},
                  {"bootstrap", sampler.bootstrap},
                  {"max_iterations", sampler.max_iterations},
                  {"slice_retries", sampler.slice_retries},
                  {"slice_width", sampler.slice_width}};
  j["seed"] = seed;
  j["output"] = output;
  j["diagnostics"] = {{"K", is_k}, {"M", is_m}, {"proposal", to_string(proposal)}};
  j["diagnostics"]["grid"] =
      grid ? json{{"lo", grid->lo}, {"hi", grid->hi}, {"n", grid->n}} : json(nullptr);
  j["recover"] = {{"S", recover_samples}};
  j["bench"] = {{"sizes", bench_sizes}, {"repeats", bench_repeats}};
  j["reproduce"] = {{"live", reproduce_live}, {"seeds", reproduce_seeds}};
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  Section top("", j);

  if (const json* m = top.sub("model")) {
    if (m->is_string()) {
      c.model = m->get<std::string>();
    } else {
      Section s("model", *m);
      s.read("name", c.model);
      s.read("params", c.model_params);
      s.read("data", c.data);
      s.finish();
      if (!c.model_params.is_object()) throw ConfigError("model.params must be a JSON object");
    }
  }

  std::string mode = to_string(c.likelihood.mode), warm = to_string(c.likelihood.warm);
  std::string est = estimator_name(c.likelihood.student.estimator);
  top.read("mode", mode);
  top.read("warm_start", warm);
  top.read("nu_estimator", est);
  c.likelihood.mode = parse_mode(mode);
  c.likelihood.warm = parse_warm_policy(warm);
  c.likelihood.student.estimator = parse_estimator(est);

  if (const json* sj = top.sub("sampler")) {
    Section s("sampler", *sj);
    std::string volume = to_string(c.sampler.volume);
    s.read("live", c.sampler.live);
    s.read("batch", c.sampler.batch);
    s.read("slice_steps", c.sampler.slice_steps);
    s.read("termination", c.sampler.termination);
    s.read("threads", c.sampler.threads);
    s.read("volume", volume);
    s.read("bootstrap", c.sampler.bootstrap);
    s.read("max_iterations", c.sampler.max_iterations);
    s.read("slice_retries", c.sampler.slice_retries);
    s.read("slice_width", c.sampler.slice_width);
    s.finish();
    c.sampler.volume = parse_volume_model(volume);
    if (!sj->contains("batch")) c.sampler.batch = std::max<std::size_t>(1, c.sampler.live / 5);
  }

  top.read("seed", c.seed);
  top.read("output", c.output);
  if (c.output.empty()) throw ConfigError("output must not be empty");

  if (const json* dj = top.sub("diagnostics")) {
    Section s("diagnostics", *dj);
    std::string proposal = to_string(c.proposal);
    s.read("K", c.is_k);
    s.read("M", c.is_m);
    s.read("proposal", proposal);
    if (const json* g = s.sub("grid"); g && !g->is_null()) {
      ThetaGrid grid;
      Section gs("diagnostics.grid", *g);
      gs.read("lo", grid.lo);
      gs.read("hi", grid.hi);
      gs.read("n", grid.n);
      gs.finish();
      if (!(grid.hi > grid.lo) || grid.n < 2) throw ConfigError("diagnostics.grid needs lo < hi and n >= 2");
      c.grid = grid;
    }
    s.finish();
    c.proposal = parse_proposal(proposal);
  }
  require_positive("diagnostics.K", c.is_k);
  require_positive("diagnostics.M", c.is_m);

  if (const json* rj = top.sub("recover")) {
    Section s("recover", *rj);
    s.read("S", c.recover_samples);
    s.finish();
  }
  require_positive("recover.S", c.recover_samples);

  if (const json* bj = top.sub("bench")) {
    Section s("bench", *bj);
    s.read("sizes", c.bench_sizes);
    s.read("repeats", c.bench_repeats);
    s.finish();
  }
  if (c.bench_sizes.empty()) throw ConfigError("bench.sizes must not be empty");
  for (auto n : c.bench_sizes)
    if (n < 2) throw ConfigError("bench.sizes entries must be >= 2");
  require_positive("bench.repeats", c.bench_repeats);

  if (const json* pj = top.sub("reproduce")) {
    Section s("reproduce", *pj);
    s.read("live", c.reproduce_live);
    s.read("seeds", c.reproduce_seeds);
    s.finish();
  }
  if (c.reproduce_seeds.empty()) throw ConfigError("reproduce.seeds must not be empty");
  if (c.reproduce_live < 10) throw ConfigError("reproduce.live must be >= 10");

  top.finish();
  c.sampler.seed = c.seed;
  c.sampler.validate();
  return c;
}

void apply_override(json& raw, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &raw;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("override key '" + key + "' descends into a non-object");
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    // `model` may be given as a bare name; promote it to an object.
    json& next = (*node)[part];
    if (part == "model" && next.is_string()) next = json{{"name", next.get<std::string>()}};
    node = &next;
    start = dot + 1;
  }
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  json raw = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
      raw = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!raw.is_object()) throw ConfigError("config root must be a JSON object");
  }
  if (const char* env = std::getenv("ALCS_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long s = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing");
      raw["seed"] = s;
    } catch (const std::exception&) {
      throw ConfigError("ALCS_SEED must be a non-negative integer");
    }
  }
  for (const auto& o : overrides) apply_override(raw, o);
  return RunConfig::from_json(raw);
}

}  // namespace alcs
