#pragma once

// Two-phase primal simplex on a dense Eigen tableau for
//
//   min c.x   s.t.  A x = b,  x >= 0.
//
// Phase 1 starts from an all-artificial basis. Artificials that stay basic
// at level zero are pivoted out where possible; rows where that is impossible
// are linearly dependent and their artificial is pinned for phase 2.
// Pricing is Dantzig (most negative reduced cost) until a run of degenerate
// pivots, then Bland's rule for the rest of the solve.

#include "urot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace urot {

enum class LpStatus { optimal, infeasible, unbounded };

template <typename Scalar>
struct LpResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  LpStatus status = LpStatus::optimal;
  Vector x;
  Scalar objective = 0;
  Index iterations = 0;
  bool used_bland = false;
};

struct LpOptions {
  double tol = 1e-11;          // relative to the largest |A|, |b|, |c| entry
  Index bland_after = -1;      // consecutive degenerate pivots; -1 = 2 (rows + cols)
  Index max_iterations = -1;   // -1 = 50 (rows + cols) + 1000
};

template <typename Scalar>
class DenseSimplex {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

  DenseSimplex(const Matrix& A, const Vector& b, const Vector& c, LpOptions opts = {})
      : opts_(opts), m_(A.rows()), n_(A.cols()) {
    if (b.size() != m_ || c.size() != n_) throw Error("lp: inconsistent dimensions");
    const Scalar scale = std::max<Scalar>(
        {Scalar(1), A.size() ? A.cwiseAbs().maxCoeff() : Scalar(0),
         m_ ? b.cwiseAbs().maxCoeff() : Scalar(0), n_ ? c.cwiseAbs().maxCoeff() : Scalar(0)});
    eps_ = Scalar(opts_.tol) * scale;
    // Columns: n structural, m artificial, 1 right-hand side.
    T_ = Matrix::Zero(m_ + 1, n_ + m_ + 1);
    for (Index r = 0; r < m_; ++r) {
      const Scalar sign = b(r) < 0 ? Scalar(-1) : Scalar(1);
      T_.row(r).head(n_) = sign * A.row(r);
      T_(r, n_ + r) = 1;
      T_(r, n_ + m_) = sign * b(r);
    }
    basis_.resize(m_);
    for (Index r = 0; r < m_; ++r) basis_[r] = n_ + r;
    c_ = c;
  }

  LpResult<Scalar> solve() {
    LpResult<Scalar> res;
    const Index bland_after =
        opts_.bland_after >= 0 ? opts_.bland_after : 2 * (m_ + n_);
    max_iter_ = opts_.max_iterations >= 0 ? opts_.max_iterations : 50 * (m_ + n_) + 1000;

    // Phase 1: minimise the sum of artificials.
    T_.row(m_).setZero();
    for (Index r = 0; r < m_; ++r) T_.row(m_) -= T_.row(r);
    T_.row(m_).segment(n_, m_).setZero();
    allowed_ = n_ + m_;
    if (!iterate(res, bland_after)) throw Error("lp: phase 1 unbounded (internal error)");
    const Scalar infeas = -T_(m_, n_ + m_);
    if (infeas > eps_ * std::max<Scalar>(1, Scalar(m_))) {
      res.status = LpStatus::infeasible;
      return res;
    }
    drive_out_artificials();

    // Phase 2 with artificial columns barred from entering.
    allowed_ = n_;
    T_.row(m_).setZero();
    T_.row(m_).head(n_) = c_.transpose();
    for (Index r = 0; r < m_; ++r) {
      const Index j = basis_[r];
      if (j < n_ && c_(j) != Scalar(0)) T_.row(m_) -= c_(j) * T_.row(r);
    }
    if (!iterate(res, bland_after)) {
      res.status = LpStatus::unbounded;
      return res;
    }
    res.x = Vector::Zero(n_);
    for (Index r = 0; r < m_; ++r)
      if (basis_[r] < n_) res.x(basis_[r]) = std::max<Scalar>(T_(r, n_ + m_), 0);
    res.objective = c_.dot(res.x);
    return res;
  }

 private:
  // Returns false on an unbounded ray.
  bool iterate(LpResult<Scalar>& res, Index bland_after) {
    Index degenerate_run = 0;
    bool& bland = res.used_bland;
    while (true) {
      const Index e = bland ? entering_bland() : entering_dantzig();
      if (e < 0) return true;
      if (res.iterations >= max_iter_) throw Error("lp: simplex iteration limit reached");
      Index leave = -1;
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (Index r = 0; r < m_; ++r) {
        const Scalar a = T_(r, e);
        if (a <= eps_) continue;
        const Scalar ratio = std::max<Scalar>(T_(r, n_ + m_), 0) / a;
        if (ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave < 0) return false;
      pivot(leave, e);
      ++res.iterations;
      if (best == Scalar(0)) {
        if (++degenerate_run > bland_after) bland = true;
      } else {
        degenerate_run = 0;
      }
    }
  }

  Index entering_dantzig() const {
    Index e = -1;
    Scalar best = -eps_;
    for (Index j = 0; j < allowed_; ++j)
      if (T_(m_, j) < best) {
        best = T_(m_, j);
        e = j;
      }
    return e;
  }

  Index entering_bland() const {
    for (Index j = 0; j < allowed_; ++j)
      if (T_(m_, j) < -eps_) return j;
    return -1;
  }

  void pivot(Index r, Index e) {
    const RowVector row = T_.row(r) / T_(r, e);
    const Vector col = T_.col(e);
    T_.noalias() -= col * row;
    T_.row(r) = row;
    basis_[r] = e;
  }

  void drive_out_artificials() {
    for (Index r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      Index best = -1;
      Scalar mag = eps_;
      for (Index j = 0; j < n_; ++j)
        if (std::abs(T_(r, j)) > mag) {
          mag = std::abs(T_(r, j));
          best = j;
        }
      // No structural entry: the row is redundant and its artificial stays at 0.
      if (best >= 0) pivot(r, best);
    }
  }

  LpOptions opts_;
  Index m_, n_;
  Index allowed_ = 0;
  Index max_iter_ = 0;
  Scalar eps_ = 0;
  Matrix T_;
  Vector c_;
  std::vector<Index> basis_;
};

template <typename Scalar>
LpResult<Scalar> solve_lp(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                          const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                          const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c, LpOptions opts = {}) {
  return DenseSimplex<Scalar>(A, b, c, opts).solve();
}

}  // namespace urot
