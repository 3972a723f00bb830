#pragma once

#include "urot/metric.hpp"

#include <map>
#include <vector>

namespace urot {

/// Nested covers Q_0 subset ... subset Q_L of X, plus Q_{L+1} = X.
///
/// All levels are prefixes of one farthest-first traversal started at point
/// 0, so Q_j is the shortest prefix covering X within q^-j diam(X). Leaves
/// (level L + 1) are listed in the original point order.
struct CoveringHierarchy {
  double q = 2;
  int L = 0;
  double diam = 0;
  Eigen::MatrixXd points;                  // X, column-wise
  std::vector<std::vector<Index>> levels;  // levels[j] holds point indices, j = 0..L+1
  std::vector<std::vector<Index>> parent;  // parent[j][k] = position in levels[j-1]; parent[0] empty

  double radius(int j) const;  // q^-j diam
  double height(int l) const;  // (q^(1-l) - q^-L) / (q - 1) diam, 0 at l = L + 1
  Index level_size(int j) const { return static_cast<Index>(levels[j].size()); }
  /// Index of the point with exactly these coordinates, -1 if absent.
  Index find_point(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  friend CoveringHierarchy build_hierarchy(const Eigen::MatrixXd&, const GroundMetric&, double, int);
  std::map<std::vector<double>, Index> index_;
};

CoveringHierarchy build_hierarchy(const Eigen::MatrixXd& X, const GroundMetric& metric, double q,
                                  int L);

/// Checks the structural invariants; returns an empty string when all hold.
std::string check_hierarchy(const CoveringHierarchy& h, const GroundMetric& metric);

/// Rooted tree whose leaves all have height 0 and whose heights strictly
/// increase towards the root. The path metric uses edge weights
/// h(par(v)) - h(v), so two leaves are 2 h(lca) apart.
class UltrametricTree {
 public:
  UltrametricTree(std::vector<Index> parent, std::vector<double> height);
  static UltrametricTree from_hierarchy(const CoveringHierarchy& h);

  Index size() const { return static_cast<Index>(parent_.size()); }
  Index root() const { return root_; }
  Index parent(Index v) const { return parent_[v]; }
  double height(Index v) const { return height_[v]; }
  const std::vector<Index>& children(Index v) const { return children_[v]; }
  /// Leaf nodes in increasing node order.
  const std::vector<Index>& leaves() const { return leaves_; }
  Index leaf_count() const { return static_cast<Index>(leaves_.size()); }

  Index lca(Index u, Index v) const;
  double distance(Index u, Index v) const;
  /// Tree distances between leaves, in leaf order.
  Eigen::MatrixXd leaf_distances() const;
  /// Nodes ordered so that every child precedes its parent.
  const std::vector<Index>& postorder() const { return post_; }

 private:
  std::vector<Index> parent_;
  std::vector<double> height_;
  std::vector<std::vector<Index>> children_;
  std::vector<Index> leaves_;
  std::vector<Index> post_;
  Index root_ = -1;
};

/// Closed form of KR^p for the tree metric d_T^p; a and b are masses on the
/// leaves in leaf order.
double tree_kr(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const UltrametricTree& tree,
               double p, double C);

/// Same for measures whose support points are points of the hierarchy.
double tree_kr(const Measure& mu, const Measure& nu, const CoveringHierarchy& h, double p,
               double C);

/// Upper bound on KR^p from the covering tree built on supp(mu) U supp(nu).
double tree_upper_bound(const Measure& mu, const Measure& nu, double q, int L, double p, double C,
                        const GroundMetric& metric = GroundMetric::euclidean());

}  // namespace urot
