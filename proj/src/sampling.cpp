#include "urot/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace urot {

Measure sample_multinomial(const Measure& mu, long N, Rng& rng) {
  if (N < 1) throw Error("multinomial: N must be >= 1");
  const double M = mu.total_mass();
  if (!(M > 0)) throw Error("multinomial: measure has zero total mass");
  const Index n = mu.size();
  std::vector<double> cdf(n);
  std::partial_sum(mu.masses().data(), mu.masses().data() + n, cdf.begin());
  std::vector<long> count(n, 0);
  for (long k = 0; k < N; ++k) {
    const double u = rng.uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    ++count[it - cdf.begin()];
  }
  Index kept = 0;
  for (const long c : count) kept += c > 0;
  Eigen::MatrixXd pts(mu.dim(), kept);
  Eigen::VectorXd mass(kept);
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    if (count[i] == 0) continue;
    pts.col(k) = mu.point(i);
    mass(k) = M * static_cast<double>(count[i]) / static_cast<double>(N);
    ++k;
  }
  return {pts, mass};
}

Measure sample_bernoulli(const Measure& mu, const Eigen::VectorXd& s_x, Rng& rng,
                         bool general_masses) {
  if (s_x.size() != mu.size()) throw Error("bernoulli: success vector length mismatch");
  for (Index i = 0; i < mu.size(); ++i) {
    if (!(s_x(i) >= 0 && s_x(i) <= 1)) throw Error("bernoulli: s_x must lie in [0, 1]");
    if (!general_masses && mu.mass(i) != 1)
      throw Error("bernoulli: unit masses required (enable general masses to lift this)");
    if (s_x(i) == 0) throw Error("bernoulli: s_x = 0 at a support point (estimator undefined)");
  }
  std::vector<Index> keep;
  for (Index i = 0; i < mu.size(); ++i)
    if (rng.bernoulli(s_x(i))) keep.push_back(i);
  Eigen::MatrixXd pts(mu.dim(), static_cast<Index>(keep.size()));
  Eigen::VectorXd mass(static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    pts.col(k) = mu.point(keep[k]);
    mass(k) = mu.mass(keep[k]) / s_x(keep[k]);
  }
  return {pts, mass};
}

Measure sample_poisson(const Measure& mu, double t, double s, Rng& rng) {
  if (!(t > 0) || !std::isfinite(t)) throw Error("poisson: t must be > 0");
  if (!(s > 0 && s <= 1)) throw Error("poisson: s must lie in (0, 1]");
  std::vector<Index> idx;
  std::vector<double> w;
  for (Index i = 0; i < mu.size(); ++i) {
    // Draw order per point is fixed: Poisson count, then the thinning coin.
    const auto P = rng.poisson(t * mu.mass(i));
    const bool B = rng.bernoulli(s);
    if (B && P > 0) {
      idx.push_back(i);
      w.push_back(static_cast<double>(P) / (s * t));
    }
  }
  Eigen::MatrixXd pts(mu.dim(), static_cast<Index>(idx.size()));
  Eigen::VectorXd mass(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    pts.col(k) = mu.point(idx[k]);
    mass(k) = w[k];
  }
  return {pts, mass};
}

Measure sample_subsample(const Measure& mu, long N, Rng& rng) {
  const Index n = mu.size();
  if (N < 1 || N > n)
    throw Error("subsample: N = " + std::to_string(N) + " must lie in [1, " + std::to_string(n) + "]");
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (Index k = 0; k < N; ++k) {
    const auto j = k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - k)));
    std::swap(perm[k], perm[j]);
  }
  std::sort(perm.begin(), perm.begin() + N);
  Eigen::MatrixXd pts(mu.dim(), N);
  Eigen::VectorXd mass(N);
  for (Index k = 0; k < N; ++k) {
    pts.col(k) = mu.point(perm[k]);
    mass(k) = mu.mass(perm[k]);
  }
  const double M = mu.total_mass();
  if (N == n) return mu;
  mass *= M / mass.sum();
  return {pts, mass};
}

Eigen::VectorXd success_profile(const Eigen::MatrixXd& points, double s0) {
  if (!(s0 > 0)) throw Error("success profile: s0 must be > 0");
  if (points.cols() > 0 && points.rows() != 2) throw Error("success profile: points must be 2-D");
  Eigen::VectorXd s(points.cols());
  const Eigen::Vector2d center(0.5, 0.5);
  for (Index i = 0; i < points.cols(); ++i) s(i) = s0 / ((points.col(i) - center).norm() + s0);
  return s;
}

SamplerKind parse_sampler(const std::string& name) {
  if (name == "multinomial") return SamplerKind::multinomial;
  if (name == "bernoulli") return SamplerKind::bernoulli;
  if (name == "poisson") return SamplerKind::poisson;
  if (name == "subsample") return SamplerKind::subsample;
  throw Error("unknown sampling model '" + name + "'");
}

std::string to_string(SamplerKind k) {
  switch (k) {
    case SamplerKind::multinomial: return "multinomial";
    case SamplerKind::bernoulli: return "bernoulli";
    case SamplerKind::poisson: return "poisson";
    case SamplerKind::subsample: return "subsample";
  }
  return "?";
}

Measure draw(const Measure& mu, const SamplerConfig& cfg, Rng& rng) {
  switch (cfg.kind) {
    case SamplerKind::multinomial: return sample_multinomial(mu, cfg.N, rng);
    case SamplerKind::poisson: return sample_poisson(mu, cfg.t, cfg.s, rng);
    case SamplerKind::subsample: return sample_subsample(mu, cfg.N, rng);
    case SamplerKind::bernoulli: {
      const Eigen::VectorXd s = cfg.s0 > 0 ? success_profile(mu.points(), cfg.s0)
                                           : Eigen::VectorXd::Constant(mu.size(), cfg.s);
      return sample_bernoulli(mu, s, rng, cfg.general_masses);
    }
  }
  throw Error("unknown sampling model");
}

Measure draw(const Measure& mu, const SamplerConfig& cfg, std::uint64_t stream) {
  Rng rng(cfg.seed, stream);
  return draw(mu, cfg, rng);
}

}  // namespace urot
