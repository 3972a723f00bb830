#include "urot/tree.hpp"

#include "urot/kr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace urot {

double CoveringHierarchy::radius(int j) const { return std::pow(q, -j) * diam; }

double CoveringHierarchy::height(int l) const {
  if (l >= L + 1) return 0;
  return (std::pow(q, 1 - l) - std::pow(q, -L)) / (q - 1) * diam;
}

Index CoveringHierarchy::find_point(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const auto it = index_.find(std::vector<double>(x.data(), x.data() + x.size()));
  return it == index_.end() ? -1 : it->second;
}

CoveringHierarchy build_hierarchy(const Eigen::MatrixXd& X, const GroundMetric& metric, double q,
                                  int L) {
  if (X.cols() == 0) throw Error("hierarchy: empty point set");
  if (!(q > 1) || !std::isfinite(q)) throw Error("hierarchy: resolution q must be > 1");
  if (L < 0) throw Error("hierarchy: depth L must be >= 0");
  const Index n = X.cols();
  CoveringHierarchy h;
  h.q = q;
  h.L = L;
  h.points = X;
  h.diam = diameter(X, metric);
  for (Index i = 0; i < n; ++i)
    h.index_.emplace(std::vector<double>(X.col(i).data(), X.col(i).data() + X.rows()), i);

  // Farthest-first order; cover[k] = covering radius of the first k + 1 centers.
  std::vector<Index> order{0};
  std::vector<double> cover;
  Eigen::VectorXd gap(n);
  for (Index i = 0; i < n; ++i) gap(i) = metric(X.col(i), X.col(0));
  while (true) {
    Index far = 0;
    const double r = gap.maxCoeff(&far);
    cover.push_back(r);
    if (r == 0 || static_cast<Index>(order.size()) == n) break;
    order.push_back(far);
    for (Index i = 0; i < n; ++i) gap(i) = std::min(gap(i), metric(X.col(i), X.col(far)));
  }

  const double slack = 1e-12 * h.diam;
  h.levels.resize(L + 2);
  for (int j = 0; j <= L; ++j) {
    std::size_t k = 0;
    while (cover[k] > h.radius(j) + slack) ++k;
    h.levels[j].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k + 1));
  }
  h.levels[L + 1].resize(n);
  for (Index i = 0; i < n; ++i) h.levels[L + 1][i] = i;

  // Parent: lowest point index among the level above within its radius.
  h.parent.resize(L + 2);
  for (int j = 1; j <= L + 1; ++j) {
    const auto& up = h.levels[j - 1];
    const double r = h.radius(j - 1) + slack;
    for (const Index x : h.levels[j]) {
      Index best = -1;
      for (std::size_t k = 0; k < up.size(); ++k)
        if (metric(X.col(x), X.col(up[k])) <= r && (best < 0 || up[k] < up[best]))
          best = static_cast<Index>(k);
      if (best < 0) throw Error("hierarchy: cover invariant violated (internal error)");
      h.parent[j].push_back(best);
    }
  }
  return h;
}

std::string check_hierarchy(const CoveringHierarchy& h, const GroundMetric& metric) {
  std::ostringstream err;
  const Index n = h.points.cols();
  const double slack = 1e-12 * std::max(h.diam, 1.0);
  if (h.levels.size() != static_cast<std::size_t>(h.L + 2)) err << "wrong level count; ";
  if (h.levels.front().size() != 1) err << "|Q_0| != 1; ";
  if (h.level_size(h.L + 1) != n) err << "Q_{L+1} != X; ";
  for (int j = 0; j <= h.L; ++j) {
    if (h.levels[j].size() > h.levels[j + 1].size()) err << "|Q_j| decreases at " << j << "; ";
    for (Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const Index c : h.levels[j]) best = std::min(best, metric(h.points.col(i), h.points.col(c)));
      if (best > h.radius(j) + slack) err << "level " << j << " does not cover point " << i << "; ";
    }
  }
  for (int j = 1; j <= h.L + 1; ++j)
    for (std::size_t k = 0; k < h.levels[j].size(); ++k) {
      const Index x = h.levels[j][k];
      const Index par = h.levels[j - 1][h.parent[j][k]];
      if (metric(h.points.col(x), h.points.col(par)) > h.radius(j - 1) + slack)
        err << "parent too far at level " << j << "; ";
    }
  return err.str();
}

UltrametricTree::UltrametricTree(std::vector<Index> parent, std::vector<double> height)
    : parent_(std::move(parent)), height_(std::move(height)) {
  const Index n = size();
  if (n == 0 || static_cast<Index>(height_.size()) != n) throw Error("tree: malformed input");
  children_.assign(n, {});
  for (Index v = 0; v < n; ++v) {
    if (parent_[v] < 0) {
      if (root_ >= 0) throw Error("tree: more than one root");
      root_ = v;
      continue;
    }
    if (parent_[v] >= n) throw Error("tree: parent index out of range");
    if (!(height_[parent_[v]] > height_[v])) throw Error("tree: heights must increase towards the root");
    children_[parent_[v]].push_back(v);
  }
  if (root_ < 0) throw Error("tree: no root");
  // Iterative DFS; reversed preorder lists children before parents.
  std::vector<Index> stack{root_}, pre;
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    pre.push_back(v);
    for (const Index c : children_[v]) stack.push_back(c);
  }
  if (static_cast<Index>(pre.size()) != n) throw Error("tree: not connected");
  post_.assign(pre.rbegin(), pre.rend());
  for (Index v = 0; v < n; ++v)
    if (children_[v].empty()) {
      if (height_[v] != 0) throw Error("tree: leaves must have height 0");
      leaves_.push_back(v);
    }
}

UltrametricTree UltrametricTree::from_hierarchy(const CoveringHierarchy& h) {
  std::vector<Index> offset{0};
  for (const auto& lvl : h.levels) offset.push_back(offset.back() + static_cast<Index>(lvl.size()));
  std::vector<Index> parent(offset.back(), -1);
  std::vector<double> height(offset.back());
  for (int j = 0; j <= h.L + 1; ++j)
    for (std::size_t k = 0; k < h.levels[j].size(); ++k) {
      const Index node = offset[j] + static_cast<Index>(k);
      height[node] = h.height(j);
      if (j > 0) parent[node] = offset[j - 1] + h.parent[j][k];
    }
  return {std::move(parent), std::move(height)};
}

Index UltrametricTree::lca(Index u, Index v) const {
  while (u != v) {
    if (height_[u] < height_[v] || (height_[u] == height_[v] && u > v))
      u = parent_[u];
    else
      v = parent_[v];
  }
  return u;
}

double UltrametricTree::distance(Index u, Index v) const {
  const double top = height_[lca(u, v)];
  return (top - height_[u]) + (top - height_[v]);
}

Eigen::MatrixXd UltrametricTree::leaf_distances() const {
  const Index n = leaf_count();
  Eigen::MatrixXd d(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) d(i, j) = distance(leaves_[i], leaves_[j]);
  return d;
}

double tree_kr(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const UltrametricTree& tree,
               double p, double C) {
  validate_penalty(p, C);
  if (a.size() != tree.leaf_count() || b.size() != tree.leaf_count())
    throw Error("tree_kr: masses must be given on every leaf");
  std::vector<double> delta(tree.size(), 0.0);
  for (Index k = 0; k < tree.leaf_count(); ++k) delta[tree.leaves()[k]] = a(k) - b(k);
  for (const Index v : tree.postorder())
    if (tree.parent(v) >= 0) delta[tree.parent(v)] += delta[v];

  const double half = C / 2, cp = std::pow(C, p), w = std::pow(2.0, p - 1);
  const bool whole = half >= tree.height(tree.root());
  double total = 0;
  for (Index v = 0; v < tree.size(); ++v) {
    const Index par = tree.parent(v);
    const double hv = std::pow(tree.height(v), p);
    // Edges strictly inside a subtree rooted in R(C).
    if (par >= 0 && tree.height(par) <= half)
      total += w * (std::pow(tree.height(par), p) - hv) * std::abs(delta[v]);
    const bool in_r = (par < 0) ? whole : (tree.height(v) <= half && half < tree.height(par));
    if (in_r) total += (cp / 2 - w * hv) * std::abs(delta[v]);
  }
  return total;
}

double tree_kr(const Measure& mu, const Measure& nu, const CoveringHierarchy& h, double p,
               double C) {
  const Index n = h.points.cols();
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n), b = Eigen::VectorXd::Zero(n);
  for (const auto& [m, v] : {std::pair{&mu, &a}, std::pair{&nu, &b}})
    for (Index i = 0; i < m->size(); ++i) {
      const Index k = h.find_point(m->point(i));
      if (k < 0) throw Error("tree_kr: measure support is not contained in the tree leaves");
      (*v)(k) += m->mass(i);
    }
  return tree_kr(a, b, UltrametricTree::from_hierarchy(h), p, C);
}

double tree_upper_bound(const Measure& mu, const Measure& nu, double q, int L, double p, double C,
                        const GroundMetric& metric) {
  validate_penalty(p, C);
  detail::require_same_dim(mu, nu);
  const Measure u = combine(mu, nu);
  const double cp = std::pow(C, p);
  if (u.empty()) return 0;
  const auto h = build_hierarchy(u.points(), metric, q, L);
  const double dmin = min_distance(u.points(), metric);
  if (C <= std::max(2 * h.height(L), dmin)) return cp / 2 * tv_distance(mu, nu);

  // Signed subtree mass differences at every (level, position).
  const Index n = u.size();
  std::vector<std::vector<double>> delta(L + 2);
  delta[L + 1].resize(n);
  for (Index i = 0; i < n; ++i) delta[L + 1][i] = mu.mass_at(u.point(i)) - nu.mass_at(u.point(i));
  for (int j = L + 1; j >= 1; --j) {
    delta[j - 1].assign(h.levels[j - 1].size(), 0.0);
    for (std::size_t k = 0; k < h.levels[j].size(); ++k) delta[j - 1][h.parent[j][k]] += delta[j][k];
  }
  auto B = [&](int l) {
    double s = 0;
    for (int j = l; j <= L + 1; ++j) {
      const double step = std::pow(h.height(j - 1), p) - std::pow(h.height(j), p);
      for (const double d : delta[j]) s += step * std::abs(d);
    }
    return std::pow(2.0, p - 1) * s;
  };
  if (C >= 2 * h.height(0))
    return (cp / 2 - std::pow(2.0, p - 1) * std::pow(h.height(0), p)) * std::abs(delta[0][0]) + B(1);
  for (int l = 1; l <= L; ++l)
    if (2 * h.height(l) <= C && C < 2 * h.height(l - 1)) return B(l);
  throw Error("tree_upper_bound: no branch selected (internal error)");
}

}  // namespace urot
