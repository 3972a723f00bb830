#pragma once

#include "urot/measure.hpp"
#include "urot/rng.hpp"

#include <string>

namespace urot {

/// N categorical draws from mu / M(mu); each draw carries M(mu) / N.
Measure sample_multinomial(const Measure& mu, long N, Rng& rng);

/// Keeps point x with probability s_x and mass mu(x) / s_x. Unless
/// `general_masses` is set every mass of mu must equal 1.
Measure sample_bernoulli(const Measure& mu, const Eigen::VectorXd& s_x, Rng& rng,
                         bool general_masses = false);

/// B_x P_x / (s t) at x, P_x ~ Poisson(t mu(x)), B_x ~ Bernoulli(s).
Measure sample_poisson(const Measure& mu, double t, double s, Rng& rng);

/// N support points without replacement, masses rescaled to total M(mu).
Measure sample_subsample(const Measure& mu, long N, Rng& rng);

/// s0 / (|x - (0.5, 0.5)| + s0) for every point of mu.
Eigen::VectorXd success_profile(const Eigen::MatrixXd& points, double s0);

enum class SamplerKind { multinomial, bernoulli, poisson, subsample };

struct SamplerConfig {
  SamplerKind kind = SamplerKind::poisson;
  long N = 1;
  double t = 1;
  double s = 1;
  double s0 = -1;            // bernoulli: profile parameter; < 0 means use `s` everywhere
  bool general_masses = false;
  std::uint64_t seed = 0;
};

SamplerKind parse_sampler(const std::string& name);
std::string to_string(SamplerKind k);

/// One draw for replication `stream`.
Measure draw(const Measure& mu, const SamplerConfig& cfg, std::uint64_t stream);
/// Same, but with a caller-owned generator.
Measure draw(const Measure& mu, const SamplerConfig& cfg, Rng& rng);

}  // namespace urot
