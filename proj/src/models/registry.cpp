#include <functional>
#include <map>
#include <set>

#include "internal.hpp"

namespace alcs {

namespace {

// Reads known keys out of a JSON object and rejects anything else.
class Params {
 public:
  Params(const std::string& model, const json& j) : model_(model), j_(j.is_null() ? json::object() : j) {
    if (!j_.is_object()) throw ConfigError(model + ": params must be a JSON object");
  }

  template <class T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(model_ + "." + key + ": " + e.what());
    }
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError(model_ + ": unknown parameter '" + k + "'");
  }

 private:
  std::string model_;
  json j_;
  std::set<std::string> seen_;
};

RadonConfig radon_cfg(const json& j) {
  RadonConfig c;
  Params p("radon", j);
  p.read("counties", c.counties);
  p.read("per_county", c.per_county);
  p.read("seed", c.seed);
  p.finish();
  return c;
}

BrownianConfig brownian_cfg(const json& j) {
  BrownianConfig c;
  Params p("brownian", j);
  p.read("steps", c.steps);
  p.read("sigma_true", c.sigma_true);
  p.read("seed", c.seed);
  p.finish();
  return c;
}

LgcpConfig lgcp_cfg(const json& j) {
  LgcpConfig c;
  Params p("lgcp", j);
  p.read("grid", c.grid);
  p.read("log_a_true", c.log_a_true);
  p.read("log_l_true", c.log_l_true);
  p.read("mean_count", c.mean_count);
  p.read("seed", c.seed);
  p.finish();
  return c;
}

SvConfig sv_cfg(const json& j) {
  SvConfig c;
  Params p("sv", j);
  p.read("steps", c.steps);
  p.read("beta_true", c.beta_true);
  p.read("mu_true", c.mu_true);
  p.read("sigma_true", c.sigma_true);
  p.read("seed", c.seed);
  p.finish();
  return c;
}

IrtConfig irt_cfg(const json& j) {
  IrtConfig c;
  Params p("irt", j);
  p.read("students", c.students);
  p.read("questions", c.questions);
  p.read("fill", c.fill);
  p.read("mu_true", c.mu_true);
  p.read("seed", c.seed);
  p.read("all_correct", c.all_correct);
  p.finish();
  return c;
}

SneConfig sne_cfg(const json& j) {
  SneConfig c;
  Params p("sne", j);
  std::string cosmo = "lcdm";
  p.read("objects", c.objects);
  p.read("block", c.block);
  p.read("cosmology", cosmo);
  p.read("alpha", c.alpha);
  p.read("beta", c.beta);
  p.read("seed", c.seed);
  p.finish();
  if (cosmo == "lcdm")
    c.cosmology = Cosmology::LambdaCDM;
  else if (cosmo == "wcdm")
    c.cosmology = Cosmology::WCDM;
  else
    throw ConfigError("sne.cosmology must be lcdm or wcdm");
  return c;
}

StudentHierConfig student_cfg(const json& j) {
  StudentHierConfig c;
  Params p("student_hier", j);
  p.read("objects", c.objects);
  p.read("nu", c.nu);
  p.read("mu_true", c.mu_true);
  p.read("sigma_true", c.sigma_true);
  p.read("seed", c.seed);
  p.finish();
  return c;
}

FunnelConfig funnel_cfg(const std::string& name, const json& j) {
  FunnelConfig c;
  c.linear = name == "linear_funnel";
  Params p(name, j);
  p.read("latents", c.latents);
  p.read("theta_true", c.theta_true);
  p.read("seed", c.seed);
  bool linear = c.linear;
  p.read("linear", linear);
  p.finish();
  if (linear != c.linear) throw ConfigError(name + ": 'linear' contradicts the model name");
  return c;
}

double linear_y(const json& j) {
  double y = 2.0;
  Params p("linear_gaussian", j);
  p.read("y", y);
  p.finish();
  return y;
}

void no_params(const std::string& name, const json& j) { Params(name, j).finish(); }

}  // namespace

std::vector<std::string> model_names() {
  return {"eight_schools", "radon",        "brownian",      "lgcp",          "sv",       "irt",
          "sne",           "student_hier", "tanh_funnel",   "linear_funnel", "linear_gaussian"};
}

ModelPtr make_model(const std::string& name, const json& params) {
  if (name == "eight_schools") {
    no_params(name, params);
    return make_eight_schools();
  }
  if (name == "radon") return make_radon(radon_cfg(params));
  if (name == "brownian") return make_brownian(brownian_cfg(params));
  if (name == "lgcp") return make_lgcp(lgcp_cfg(params));
  if (name == "sv") return make_sv(sv_cfg(params));
  if (name == "irt") return make_irt(irt_cfg(params));
  if (name == "sne") return make_sne(sne_cfg(params));
  if (name == "student_hier") return make_student_hier(student_cfg(params));
  if (name == "tanh_funnel" || name == "linear_funnel") return make_tanh_funnel(funnel_cfg(name, params));
  if (name == "linear_gaussian") return make_linear_gaussian(linear_y(params));
  throw ConfigError("unknown model '" + name + "'");
}

ModelPtr make_model(const std::string& name, const json& params, const SyntheticDataset& data) {
  if (data.model != name)
    throw ConfigError("dataset was generated for '" + data.model + "', not '" + name + "'");
  if (name == "radon") return detail::radon_from(radon_cfg(params), data);
  if (name == "brownian") return detail::brownian_from(brownian_cfg(params), data);
  if (name == "lgcp") return detail::lgcp_from(lgcp_cfg(params), data);
  if (name == "sv") return detail::sv_from(sv_cfg(params), data);
  if (name == "irt") return detail::irt_from(irt_cfg(params), data);
  if (name == "sne") return detail::sne_from(sne_cfg(params), data);
  if (name == "student_hier") return detail::student_hier_from(student_cfg(params), data);
  if (name == "tanh_funnel" || name == "linear_funnel") return detail::funnel_from(funnel_cfg(name, params), data);
  if (name == "linear_gaussian") {
    no_params(name, params);
    return make_linear_gaussian(data.observations.at("y").get<double>());
  }
  // eight_schools has a fixed payload
  return make_model(name, params);
}

SyntheticDataset generate_data(const std::string& name, const json& params, std::uint64_t seed) {
  json p = params.is_null() ? json::object() : params;
  if (name != "eight_schools" && name != "linear_gaussian") p["seed"] = seed;
  return make_model(name, p)->dataset();
}

}  // namespace alcs
