#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alcs/models/model.hpp"

namespace alcs {

// Rubin's eight schools, embedded data. theta = (mu, log tau).
ModelPtr make_eight_schools();

// Varying-intercept radon model. theta = (mu_alpha, beta, log sigma_alpha, log sigma_y).
struct RadonConfig {
  std::size_t counties = 85;
  std::size_t per_county = 5;
  std::uint64_t seed = 42;
};
ModelPtr make_radon(const RadonConfig& cfg = {});

// Gaussian random walk observed in unit noise. theta = (log sigma).
struct BrownianConfig {
  std::size_t steps = 50;
  double sigma_true = 0.5;
  std::uint64_t seed = 42;
};
ModelPtr make_brownian(const BrownianConfig& cfg = {});
// Exact log p(y | sigma) by the Kalman filter.
double kalman_marginal(const HierarchicalModel& brownian, double log_sigma);

// Log-Gaussian Cox process on a grid. theta = (log a, log l).
struct LgcpConfig {
  std::size_t grid = 10;
  double log_a_true = -1.0;
  double log_l_true = -1.0;
  double mean_count = 100.0;
  std::uint64_t seed = 42;
};
ModelPtr make_lgcp(const LgcpConfig& cfg = {});

// AR(1) stochastic volatility. theta = (psi_beta, mu, psi_sigma) with
// beta = tanh(psi_beta / 2), sigma = exp(psi_sigma).
struct SvConfig {
  std::size_t steps = 100;
  double beta_true = 0.96;
  double mu_true = -1.0;
  double sigma_true = 0.3;
  std::uint64_t seed = 42;
};
ModelPtr make_sv(const SvConfig& cfg = {});

// 1PL item response. theta = (mu_ability).
struct IrtConfig {
  std::size_t students = 40;
  std::size_t questions = 10;
  double fill = 0.75;
  double mu_true = 0.75;
  std::uint64_t seed = 42;
  bool all_correct = false;
};
ModelPtr make_irt(const IrtConfig& cfg = {});

// Supernova light-curve standardisation. LambdaCDM theta = (Omega_m, M),
// wCDM theta = (Omega_m, M, w0).
enum class Cosmology { LambdaCDM, WCDM };
struct SneConfig {
  std::size_t objects = 64;
  std::size_t block = 2;  // latents per object: (x1, c) per band
  Cosmology cosmology = Cosmology::LambdaCDM;
  double alpha = 0.14;
  double beta = 3.1;
  std::uint64_t seed = 42;
};
ModelPtr make_sne(const SneConfig& cfg = {});

// Student-t random effects observed in unit noise. theta = (mu, log sigma).
struct StudentHierConfig {
  std::size_t objects = 50;
  double nu = 5.0;
  double mu_true = 0.0;
  double sigma_true = 1.0;
  std::uint64_t seed = 42;
};
ModelPtr make_student_hier(const StudentHierConfig& cfg = {});
double quadrature_marginal(const HierarchicalModel& student, std::span<const double> theta);

// Funnel with tanh-compressed observations. theta = log prior variance of z.
struct FunnelConfig {
  std::size_t latents = 10;
  double theta_true = 0.0;
  bool linear = false;  // x ~ N(z, 1) instead of N(tanh z, 1)
  std::uint64_t seed = 42;
};
ModelPtr make_tanh_funnel(const FunnelConfig& cfg = {});
double funnel_quadrature(const HierarchicalModel& funnel, double theta);

// One latent, z ~ N(m, 1), y ~ N(z, 1). theta = (m) with m ~ U(-5, 5).
ModelPtr make_linear_gaussian(double y = 2.0);

// Registry keyed by name; params are the config fields above as JSON.
std::vector<std::string> model_names();
ModelPtr make_model(const std::string& name, const json& params = json::object());
// Rebuild a model from an exported dataset (observations are used verbatim).
ModelPtr make_model(const std::string& name, const json& params, const SyntheticDataset& data);
SyntheticDataset generate_data(const std::string& name, const json& params, std::uint64_t seed);

}  // namespace alcs
