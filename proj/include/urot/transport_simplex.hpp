#pragma once

// Network simplex for the balanced transportation problem
//
//   min  sum_ij cost(i,j) x(i,j)
//   s.t. sum_j x(i,j) = supply(i),  sum_i x(i,j) = demand(j),  x >= 0.
//
// The basis is a spanning tree over the m row nodes and n column nodes with
// m + n - 1 arcs, started from the northwest-corner rule. Entering arcs are
// priced in blocks (most negative reduced cost within the first block that
// has one). After a run of consecutive degenerate pivots the solver switches
// permanently to Bland's rule (first improving arc, smallest-index leaving
// arc among ties), which cannot cycle.

#include "urot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace urot {

template <typename Scalar>
struct TransportSolution {
  struct Arc {
    Index source;
    Index sink;
    Scalar flow;
  };
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<Arc> basis;  // m + n - 1 basic arcs, zero flows included
  Vector row_potential;
  Vector col_potential;
  Scalar objective = 0;
  Scalar min_reduced_cost = 0;
  Index iterations = 0;
  Index degenerate_pivots = 0;
  bool used_bland = false;
};

struct TransportOptions {
  double pricing_tol = 1e-12;   // relative to the largest cost
  double certify_tol = 1e-9;    // relative to the largest cost
  double balance_tol = 1e-12;   // relative to the total mass
  Index bland_after = -1;       // consecutive degenerate pivots; -1 = 4 (m + n)
  Index max_iterations = -1;    // -1 = 200 (m + n) + 10 m n
};

template <typename Scalar>
class TransportSimplex {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Solution = TransportSolution<Scalar>;

  TransportSimplex(const Matrix& cost, const Vector& supply, const Vector& demand,
                   TransportOptions opts = {})
      : cost_(cost), supply_(supply), demand_(demand), opts_(opts),
        m_(cost.rows()), n_(cost.cols()) {
    if (m_ == 0 || n_ == 0) throw Error("transport: empty problem");
    if (supply_.size() != m_ || demand_.size() != n_)
      throw Error("transport: marginal sizes do not match the cost matrix");
    if ((supply_.array() < 0).any() || (demand_.array() < 0).any())
      throw Error("transport: negative marginal");
    const Scalar s = supply_.sum(), d = demand_.sum();
    if (std::abs(s - d) > Scalar(opts_.balance_tol) * std::max<Scalar>(std::max(s, d), 1))
      throw Error("transport: unbalanced totals");
    max_cost_ = cost_.cwiseAbs().maxCoeff();
    cost_scale_ = max_cost_ > 0 ? max_cost_ : Scalar(1);
  }

  Solution solve() {
    initial_basis();
    const Index nodes = m_ + n_;
    const Index bland_after = opts_.bland_after >= 0 ? opts_.bland_after : 4 * nodes;
    const Index max_iter =
        opts_.max_iterations >= 0 ? opts_.max_iterations : 200 * nodes + 10 * m_ * n_;
    const Scalar tol = Scalar(opts_.pricing_tol) * cost_scale_;

    Solution sol;
    Index degenerate_run = 0;
    bool bland = false;
    while (true) {
      compute_tree();
      const Index entering = bland ? price_bland(tol) : price_block(tol);
      if (entering < 0) break;
      if (sol.iterations >= max_iter) throw Error("transport: iteration limit reached");
      const bool degenerate = pivot(entering, bland);
      ++sol.iterations;
      if (degenerate) {
        ++sol.degenerate_pivots;
        if (++degenerate_run > bland_after) bland = true;
      } else {
        degenerate_run = 0;
      }
    }

    sol.used_bland = bland;
    sol.row_potential = pot_.head(m_);
    sol.col_potential = pot_.tail(n_);
    sol.min_reduced_cost = std::numeric_limits<Scalar>::infinity();
    for (Index i = 0; i < m_; ++i)
      for (Index j = 0; j < n_; ++j)
        if (!basic_[i * n_ + j])
          sol.min_reduced_cost = std::min(sol.min_reduced_cost, reduced_cost(i, j));
    if (sol.min_reduced_cost < -Scalar(opts_.certify_tol) * cost_scale_)
      throw Error("transport: optimality could not be certified (numerically degenerate input)");
    sol.basis.reserve(arcs_.size());
    for (const auto& a : arcs_) {
      sol.basis.push_back(a);
      sol.objective += cost_(a.source, a.sink) * a.flow;
    }
    return sol;
  }

 private:
  using Arc = typename Solution::Arc;

  Scalar reduced_cost(Index i, Index j) const { return cost_(i, j) - pot_(i) - pot_(m_ + j); }

  void add_arc(Index slot, Index i, Index j, Scalar flow) {
    arcs_[slot] = Arc{i, j, flow};
    adj_[i].push_back(slot);
    adj_[m_ + j].push_back(slot);
    basic_[i * n_ + j] = 1;
  }

  void remove_arc(Index slot) {
    const Arc& a = arcs_[slot];
    for (Index node : {a.source, m_ + a.sink}) {
      auto& list = adj_[node];
      list.erase(std::find(list.begin(), list.end(), slot));
    }
    basic_[a.source * n_ + a.sink] = 0;
  }

  void initial_basis() {
    arcs_.assign(m_ + n_ - 1, Arc{0, 0, 0});
    adj_.assign(m_ + n_, {});
    basic_.assign(m_ * n_, 0);
    Vector rs = supply_, rd = demand_;
    Index i = 0, j = 0, slot = 0;
    while (true) {
      const Scalar x = std::min(rs(i), rd(j));
      add_arc(slot++, i, j, x);
      rs(i) -= x;
      rd(j) -= x;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (i == m_ - 1)
        ++j;
      else if (j == n_ - 1)
        ++i;
      else if (rs(i) == 0)
        ++i;
      else
        ++j;
    }
  }

  void compute_tree() {
    const Index nodes = m_ + n_;
    pot_.resize(nodes);
    parent_.assign(nodes, -1);
    parent_arc_.assign(nodes, -1);
    depth_.assign(nodes, -1);
    order_.clear();
    order_.push_back(0);
    depth_[0] = 0;
    pot_(0) = 0;
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const Index node = order_[head];
      for (const Index slot : adj_[node]) {
        const Arc& a = arcs_[slot];
        const Index other = node < m_ ? m_ + a.sink : a.source;
        if (depth_[other] >= 0) continue;
        depth_[other] = depth_[node] + 1;
        parent_[other] = node;
        parent_arc_[other] = slot;
        pot_(other) = cost_(a.source, a.sink) - pot_(node);
        order_.push_back(other);
      }
    }
  }

  Index price_block(Scalar tol) {
    const Index total = m_ * n_;
    const Index block = std::max<Index>(static_cast<Index>(std::sqrt(double(total))), 16);
    Index best = -1, scanned = 0, in_block = 0;
    Scalar best_rc = -tol;
    while (scanned < total) {
      const Index e = next_arc_;
      next_arc_ = (next_arc_ + 1) % total;
      ++scanned;
      if (!basic_[e]) {
        const Scalar rc = reduced_cost(e / n_, e % n_);
        if (rc < best_rc) {
          best_rc = rc;
          best = e;
        }
      }
      if (++in_block == block) {
        if (best >= 0) return best;
        in_block = 0;
      }
    }
    return best;
  }

  Index price_bland(Scalar tol) const {
    for (Index e = 0; e < m_ * n_; ++e)
      if (!basic_[e] && reduced_cost(e / n_, e % n_) < -tol) return e;
    return -1;
  }

  // Returns true when the pivot was degenerate (zero step).
  bool pivot(Index entering, bool bland) {
    const Index ei = entering / n_, ej = entering % n_;
    // Tree path from the column node of the entering arc to its row node.
    path_.clear();
    tail_.clear();
    Index x = m_ + ej, y = ei;
    while (x != y) {
      if (depth_[x] >= depth_[y]) {
        path_.push_back(parent_arc_[x]);
        x = parent_[x];
      } else {
        tail_.push_back(parent_arc_[y]);
        y = parent_[y];
      }
    }
    path_.insert(path_.end(), tail_.rbegin(), tail_.rend());

    // Arcs at even positions lose flow, odd positions gain it.
    Index leave = -1;
    Scalar theta = std::numeric_limits<Scalar>::infinity();
    for (std::size_t k = 0; k < path_.size(); k += 2) {
      const Arc& a = arcs_[path_[k]];
      if (a.flow < theta) {
        theta = a.flow;
        leave = path_[k];
      } else if (bland && a.flow == theta) {
        const Arc& cur = arcs_[leave];
        if (a.source * n_ + a.sink < cur.source * n_ + cur.sink) leave = path_[k];
      }
    }
    for (std::size_t k = 0; k < path_.size(); ++k) {
      Arc& a = arcs_[path_[k]];
      a.flow = (k % 2 == 0) ? a.flow - theta : a.flow + theta;
    }
    remove_arc(leave);
    add_arc(leave, ei, ej, theta);
    return theta == Scalar(0);
  }

  const Matrix& cost_;
  const Vector& supply_;
  const Vector& demand_;
  TransportOptions opts_;
  Index m_, n_;
  Scalar max_cost_ = 0, cost_scale_ = 1;

  std::vector<Arc> arcs_;
  std::vector<std::vector<Index>> adj_;
  std::vector<char> basic_;
  Vector pot_;
  std::vector<Index> parent_, parent_arc_, depth_, order_, path_, tail_;
  Index next_arc_ = 0;
};

template <typename Scalar>
TransportSolution<Scalar> solve_transport(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& cost,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& supply,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& demand, TransportOptions opts = {}) {
  return TransportSimplex<Scalar>(cost, supply, demand, opts).solve();
}

}  // namespace urot
