#pragma once

#include "urot/metric.hpp"
#include "urot/transport_simplex.hpp"

#include <vector>

namespace urot {

/// Index used for the virtual point in plans over the augmented problem.
inline constexpr Index kDummy = -1;

struct PlanEntry {
  Index source;  // kDummy for the virtual source
  Index sink;    // kDummy for the virtual sink
  double mass;
};

struct TransportPlan {
  std::vector<PlanEntry> entries;  // nonzero flows only
  double objective = 0;
  bool includes_dummy = false;
  Index rows = 0;  // real source points
  Index cols = 0;  // real sink points

  double total_mass() const;
  Eigen::VectorXd row_sums() const;  // real rows only
  Eigen::VectorXd col_sums() const;  // real columns only
};

/// Balanced lift: real points first, the virtual point last in both index
/// sets. Totals are mass(mu) + mass(nu) on both sides.
struct AugmentedProblem {
  Eigen::MatrixXd cost;   // (m + 1) x (n + 1)
  Eigen::VectorXd source; // mu then mass(nu)
  Eigen::VectorXd sink;   // nu then mass(mu)
  double p = 1;
  double C = 1;
  Index m = 0;
  Index n = 0;
};

void validate_penalty(double p, double C);

/// Lift built from an m x n matrix of ground distances.
AugmentedProblem augment_costs(const Eigen::MatrixXd& dist, const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b, double p, double C);

AugmentedProblem augment(const Measure& mu, const Measure& nu, double p, double C,
                         const GroundMetric& metric = GroundMetric::euclidean());

/// Optimal plan of the lifted problem, dummy rows/columns included.
TransportPlan solve_balanced_ot(const AugmentedProblem& problem, TransportOptions opts = {});

struct KrResult {
  double value = 0;    // KR
  double value_p = 0;  // KR^p
  TransportPlan plan;  // sub-coupling between the real points
  TransportPlan augmented;
  Index iterations = 0;
};

/// KR from a ground-distance matrix between the supports of a and b.
KrResult kr_from_distances(const Eigen::MatrixXd& dist, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b, double p, double C,
                           TransportOptions opts = {});

KrResult kr_distance(const Measure& mu, const Measure& nu, double p, double C,
                     const GroundMetric& metric = GroundMetric::euclidean(),
                     TransportOptions opts = {});

/// KR^p only.
double kr_power(const Measure& mu, const Measure& nu, double p, double C,
                const GroundMetric& metric = GroundMetric::euclidean());

/// ((C^p / 2) TV)^(1/p); requires C <= the minimum distance over the union
/// of supports.
double kr_distance_tv_fastpath(const Measure& mu, const Measure& nu, double p, double C,
                               const GroundMetric& metric = GroundMetric::euclidean());

/// Transport cost of a sub-coupling plus C^p ((M(mu) + M(nu)) / 2 - M(pi)).
double plan_objective(const TransportPlan& plan, const Measure& mu, const Measure& nu, double p,
                      double C, const GroundMetric& metric = GroundMetric::euclidean());

/// Two-sided bound on KR^p in terms of TV. With a = sum (mu - nu)_+ and
/// b = sum (nu - mu)_+,
///   lower = min(C, dmin)^p TV / 2,
///   upper = min(C, diam)^p min(a, b) + (C^p / 2) |a - b|.
struct TvSandwich {
  double lower;
  double upper;
};
TvSandwich tv_sandwich(const Measure& mu, const Measure& nu, double p, double C,
                       const GroundMetric& metric = GroundMetric::euclidean());

}  // namespace urot
