#include "urot/kr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace urot {

double TransportPlan::total_mass() const {
  double s = 0;
  for (const auto& e : entries)
    if (e.source != kDummy && e.sink != kDummy) s += e.mass;
  return s;
}

Eigen::VectorXd TransportPlan::row_sums() const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(rows);
  for (const auto& e : entries)
    if (e.source != kDummy) r(e.source) += e.mass;
  return r;
}

Eigen::VectorXd TransportPlan::col_sums() const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
  for (const auto& e : entries)
    if (e.sink != kDummy) c(e.sink) += e.mass;
  return c;
}

void validate_penalty(double p, double C) {
  if (!(p >= 1) || !std::isfinite(p)) throw Error("p must be a finite number >= 1");
  if (!(C > 0) || !std::isfinite(C)) throw Error("C must be a finite number > 0");
}

AugmentedProblem augment_costs(const Eigen::MatrixXd& dist, const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b, double p, double C) {
  validate_penalty(p, C);
  const Index m = a.size(), n = b.size();
  if (dist.rows() != m || dist.cols() != n)
    throw Error("distance matrix does not match the measure sizes");
  const double cp = std::pow(C, p);
  AugmentedProblem P;
  P.p = p;
  P.C = C;
  P.m = m;
  P.n = n;
  P.cost.resize(m + 1, n + 1);
  P.cost.topLeftCorner(m, n) = dist.array().pow(p).min(cp).matrix();
  P.cost.col(n).setConstant(cp / 2);
  P.cost.row(m).setConstant(cp / 2);
  P.cost(m, n) = 0;
  const double ma = a.sum(), mb = b.sum();
  P.source.resize(m + 1);
  P.source << a, mb;
  P.sink.resize(n + 1);
  P.sink << b, ma;
  return P;
}

AugmentedProblem augment(const Measure& mu, const Measure& nu, double p, double C,
                         const GroundMetric& metric) {
  detail::require_same_dim(mu, nu);
  return augment_costs(metric.pairwise(mu.points(), nu.points()), mu.masses(), nu.masses(), p,
                       C);
}

TransportPlan solve_balanced_ot(const AugmentedProblem& problem, TransportOptions opts) {
  const auto sol = solve_transport<double>(problem.cost, problem.source, problem.sink, opts);
  TransportPlan plan;
  plan.includes_dummy = true;
  plan.rows = problem.m;
  plan.cols = problem.n;
  plan.objective = sol.objective;
  for (const auto& arc : sol.basis) {
    if (!(arc.flow > 0)) continue;
    plan.entries.push_back({arc.source == problem.m ? kDummy : arc.source,
                            arc.sink == problem.n ? kDummy : arc.sink, arc.flow});
  }
  std::sort(plan.entries.begin(), plan.entries.end(), [](const PlanEntry& x, const PlanEntry& y) {
    return std::pair(x.source, x.sink) < std::pair(y.source, y.sink);
  });
  return plan;
}

KrResult kr_from_distances(const Eigen::MatrixXd& dist, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b, double p, double C, TransportOptions opts) {
  validate_penalty(p, C);
  KrResult r;
  const double cp = std::pow(C, p);
  r.plan.rows = a.size();
  r.plan.cols = b.size();
  if (a.size() == 0 || b.size() == 0) {
    r.value_p = cp * (a.sum() + b.sum()) / 2;
    r.value = std::pow(r.value_p, 1.0 / p);
    r.plan.objective = r.value_p;
    r.augmented = r.plan;
    return r;
  }
  const AugmentedProblem P = augment_costs(dist, a, b, p, C);
  r.augmented = solve_balanced_ot(P, opts);
  r.value_p = std::max(r.augmented.objective, 0.0);
  r.value = std::pow(r.value_p, 1.0 / p);
  // Arcs costlier than destroy + create carry no transport in the sub-coupling.
  for (const auto& e : r.augmented.entries)
    if (e.source != kDummy && e.sink != kDummy && std::pow(dist(e.source, e.sink), p) <= cp)
      r.plan.entries.push_back(e);
  r.plan.objective = r.value_p;
  return r;
}

KrResult kr_distance(const Measure& mu, const Measure& nu, double p, double C,
                     const GroundMetric& metric, TransportOptions opts) {
  detail::require_same_dim(mu, nu);
  validate_penalty(p, C);
  return kr_from_distances(metric.pairwise(mu.points(), nu.points()), mu.masses(), nu.masses(),
                           p, C, opts);
}

double kr_power(const Measure& mu, const Measure& nu, double p, double C,
                const GroundMetric& metric) {
  return kr_distance(mu, nu, p, C, metric).value_p;
}

double kr_distance_tv_fastpath(const Measure& mu, const Measure& nu, double p, double C,
                               const GroundMetric& metric) {
  validate_penalty(p, C);
  const Measure u = combine(mu, nu);
  if (C > min_distance(u.points(), metric))
    throw Error("TV fast path requires C <= the minimum pairwise distance");
  return std::pow(std::pow(C, p) / 2 * tv_distance(mu, nu), 1.0 / p);
}

double plan_objective(const TransportPlan& plan, const Measure& mu, const Measure& nu, double p,
                      double C, const GroundMetric& metric) {
  double transport = 0, moved = 0;
  for (const auto& e : plan.entries) {
    if (e.source == kDummy || e.sink == kDummy) continue;
    transport += std::pow(metric(mu.point(e.source), nu.point(e.sink)), p) * e.mass;
    moved += e.mass;
  }
  return transport + std::pow(C, p) * ((mu.total_mass() + nu.total_mass()) / 2 - moved);
}

TvSandwich tv_sandwich(const Measure& mu, const Measure& nu, double p, double C,
                       const GroundMetric& metric) {
  validate_penalty(p, C);
  const Measure u = combine(mu, nu);
  const double dmin = min_distance(u.points(), metric);
  const double diam = diameter(u.points(), metric);
  double a = 0, b = 0;
  for (Index i = 0; i < u.size(); ++i) {
    const double d = mu.mass_at(u.point(i)) - nu.mass_at(u.point(i));
    (d > 0 ? a : b) += std::abs(d);
  }
  const double cp = std::pow(C, p);
  return {std::pow(std::min(C, dmin), p) * (a + b) / 2,
          std::pow(std::min(C, diam), p) * std::min(a, b) + cp / 2 * std::abs(a - b)};
}

}  // namespace urot
