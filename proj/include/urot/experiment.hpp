#pragma once

#include "urot/datasets.hpp"
#include "urot/emit.hpp"
#include "urot/sampling.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace urot {

/// Malformed or inconsistent study configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Study { kr_error, frechet_error, runtime_tradeoff, bound_vs_empirical };

Study parse_study(const std::string& name);
std::string to_string(Study s);

struct ExperimentConfig {
  Study study = Study::kr_error;

  // Population: explicit measures win, then files, then the dataset.
  std::vector<Measure> measures;
  std::vector<std::string> measure_files;
  std::optional<DatasetSpec> dataset;

  // Sampler grid; the study expands the product of the lists its model reads.
  SamplerKind model = SamplerKind::poisson;
  std::vector<double> t{1};
  std::vector<double> s{1};
  std::vector<long> N{100};
  std::vector<double> s0;  // bernoulli profile; constant `s` when empty
  bool general_masses = false;

  std::vector<double> C{1};
  double p = 1;
  long R = 0;  // 0 picks 1000, or 100 for frechet-error
  std::uint64_t seed = 0;
  std::size_t centroid_cap = 50000;
  unsigned threads = 0;  // 0 uses the hardware concurrency
  bool timing = true;    // runtime-tradeoff: wall-clock column, the only non-reproducible output

  std::string csv;
  std::string svg;
  std::string x_axis;
  bool loglog = true;
};

/// Reads the JSON study description. Throws ConfigError on bad input.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// The population measures named by the config.
std::vector<Measure> population(const ExperimentConfig& cfg);

/// |KR(mu_hat, nu_hat) - KR(mu, nu)| / KR(mu, nu) per (C, sampler) grid
/// point, with 0/0 := 0. A zero denominator with a nonzero numerator turns
/// the row into the absolute error, flagged.
ResultTable run_kr_error(const ExperimentConfig& cfg);

/// (F(bary(mu_hat)) - F(mu*)) / F(mu*), F evaluated against the population.
/// F(mu*) = 0 reports the absolute error, flagged; a centroid cap overflow
/// yields a NaN row flagged `cap-exceeded`.
ResultTable run_frechet_error(const ExperimentConfig& cfg);

/// Resampling (multinomial) against subsampling per N: relative error rows
/// plus solve-time and KR extras. N above the support size skips subsampling.
ResultTable run_runtime_tradeoff(const ExperimentConfig& cfg);

/// Monte Carlo E[KR] and E[KR^p] of mu_hat against mu next to the optimised
/// deviation bounds. Empirical rows are flagged `violated` when
/// mean > bound + 2 stderr.
ResultTable run_bound_vs_empirical(const ExperimentConfig& cfg);

ResultTable run_study(const ExperimentConfig& cfg);

/// Mean and standard error (sample std / sqrt(n)) of x in index order.
std::pair<double, double> mean_stderr(const std::vector<double>& x);

/// Runs body(r) for r in [0, n) on up to `threads` workers.
void parallel_for(long n, unsigned threads, const std::function<void(long)>& body);

}  // namespace urot
