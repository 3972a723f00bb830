#pragma once

#include "urot/kr.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace urot {

/// Minimiser of y -> sum_i |x_i - y|^p over R^D for the columns x_i.
/// p = 2: mean. p = 1: Weiszfeld with the Vardi-Zhang anchor correction.
/// Other p: reweighted fixed point with backtracking. Iterative cases stop
/// once a step is below 1e-10 of the point spread.
Eigen::VectorXd barycentric_point(const Eigen::MatrixXd& points, double p);

/// (measure, support index) pairs that generate a candidate.
using Generators = std::vector<std::pair<int, Index>>;

struct CentroidSet {
  Eigen::MatrixXd points;              // D x K candidates
  std::vector<Generators> generators;  // first generating tuple of every candidate
  Index size() const { return points.cols(); }
};

struct CentroidOptions {
  std::size_t cap = 50000;
  bool prune = true;  // drop partial tuples with a pairwise distance above 2C
};

/// Thrown when enumeration would exceed the candidate cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Whether y and its generators satisfy both membership conditions:
/// |x_l - y|^p <= C^p for every l and sum_l |x_l - y|^p <= C^p (2L - J) / 2.
bool restricted_member(const Eigen::VectorXd& y, const Eigen::MatrixXd& gens, int J, double p,
                       double C, double rel_tol = 1e-9);

/// Euclidean restricted centroid set of the measures.
CentroidSet restricted_centroid_set(const std::vector<Measure>& measures, double p, double C,
                                    CentroidOptions opts = {});

struct BarycenterSolution {
  Measure barycenter;                // mass on candidates with a_j > 1e-12
  Eigen::VectorXd weights;           // a over candidates, virtual point last
  std::vector<TransportPlan> plans;  // candidates x supp(mu_i), -1 for the virtual point
  CentroidSet centroids;
  double frechet = 0;                // recomputed with J KR evaluations
  double lp_objective = 0;
  double max_residual = 0;           // worst constraint violation relative to the total mass
  Index iterations = 0;
};

BarycenterSolution solve_barycenter(const std::vector<Measure>& measures, double p, double C,
                                    CentroidOptions opts = {});

/// (1/J) sum_i KR^p(mu_i, candidate); the J evaluations run concurrently.
double frechet_value(const Measure& candidate, const std::vector<Measure>& measures, double p,
                     double C);

}  // namespace urot
