#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace urot {

/// Base error for invalid input and solver failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Index = Eigen::Index;

/// A finitely supported nonnegative measure on R^D.
///
/// Points are stored column-wise (D x n). Construction canonicalizes the
/// input: points with identical coordinates are merged by summing their
/// masses and zero-mass points are dropped, preserving first-occurrence
/// order. Values are immutable afterwards.
template <typename Scalar>
class BasicMeasure {
 public:
  using Points = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Masses = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicMeasure() = default;
  explicit BasicMeasure(Index dim) : points_(dim, 0) {}
  BasicMeasure(const Points& points, const Masses& masses) { canonicalize(points, masses); }

  Index dim() const { return points_.rows(); }
  Index size() const { return points_.cols(); }
  bool empty() const { return points_.cols() == 0; }

  const Points& points() const { return points_; }
  const Masses& masses() const { return masses_; }
  auto point(Index i) const { return points_.col(i); }
  Scalar mass(Index i) const { return masses_(i); }
  Scalar total_mass() const { return masses_.size() == 0 ? Scalar(0) : masses_.sum(); }

  /// Mass at the given coordinates, 0 if the point is not in the support.
  Scalar mass_at(const Eigen::Ref<const Point>& x) const {
    for (Index i = 0; i < size(); ++i)
      if (points_.col(i) == x) return masses_(i);
    return Scalar(0);
  }

  friend bool operator==(const BasicMeasure& a, const BasicMeasure& b) {
    return a.points_.rows() == b.points_.rows() && a.points_.cols() == b.points_.cols() &&
           a.points_ == b.points_ && a.masses_ == b.masses_;
  }

 private:
  void canonicalize(const Points& points, const Masses& masses) {
    if (points.cols() != masses.size())
      throw Error("measure: " + std::to_string(points.cols()) + " points but " +
                  std::to_string(masses.size()) + " masses");
    std::map<std::vector<Scalar>, Index> slot;
    std::vector<Index> first;
    std::vector<Scalar> merged;
    for (Index i = 0; i < points.cols(); ++i) {
      const Scalar m = masses(i);
      if (!(m >= Scalar(0)) || !std::isfinite(static_cast<double>(m)))
        throw Error("measure: mass at point " + std::to_string(i) + " is negative or not finite");
      std::vector<Scalar> key(points.col(i).data(), points.col(i).data() + points.rows());
      for (const Scalar c : key)
        if (!std::isfinite(static_cast<double>(c)))
          throw Error("measure: non-finite coordinate at point " + std::to_string(i));
      auto [it, inserted] = slot.emplace(std::move(key), static_cast<Index>(first.size()));
      if (inserted) {
        first.push_back(i);
        merged.push_back(m);
      } else {
        merged[it->second] += m;
      }
    }
    Index kept = 0;
    for (const Scalar m : merged) kept += (m > Scalar(0));
    points_.resize(points.rows(), kept);
    masses_.resize(kept);
    Index k = 0;
    for (std::size_t s = 0; s < first.size(); ++s) {
      if (!(merged[s] > Scalar(0))) continue;
      points_.col(k) = points.col(first[s]);
      masses_(k) = merged[s];
      ++k;
    }
  }

  Points points_;
  Masses masses_;
};

using Measure = BasicMeasure<double>;

template <typename Scalar>
Scalar total_mass(const BasicMeasure<Scalar>& mu) {
  return mu.total_mass();
}

namespace detail {
template <typename Scalar>
void require_same_dim(const BasicMeasure<Scalar>& mu, const BasicMeasure<Scalar>& nu) {
  if (!mu.empty() && !nu.empty() && mu.dim() != nu.dim())
    throw Error("dimension mismatch: " + std::to_string(mu.dim()) + " vs " +
                std::to_string(nu.dim()));
}
}  // namespace detail

/// Multiset union: supports concatenated, shared points merged.
template <typename Scalar>
BasicMeasure<Scalar> combine(const BasicMeasure<Scalar>& mu, const BasicMeasure<Scalar>& nu) {
  detail::require_same_dim(mu, nu);
  if (mu.empty()) return nu;
  if (nu.empty()) return mu;
  typename BasicMeasure<Scalar>::Points pts(mu.dim(), mu.size() + nu.size());
  typename BasicMeasure<Scalar>::Masses ms(mu.size() + nu.size());
  pts << mu.points(), nu.points();
  ms << mu.masses(), nu.masses();
  return {pts, ms};
}

/// Sum over the union of supports of |mu(x) - nu(x)|.
template <typename Scalar>
Scalar tv_distance(const BasicMeasure<Scalar>& mu, const BasicMeasure<Scalar>& nu) {
  detail::require_same_dim(mu, nu);
  std::map<std::vector<Scalar>, Scalar> diff;
  auto key = [](const auto& col) {
    return std::vector<Scalar>(col.data(), col.data() + col.rows());
  };
  for (Index i = 0; i < mu.size(); ++i) diff[key(mu.point(i))] += mu.mass(i);
  for (Index i = 0; i < nu.size(); ++i) diff[key(nu.point(i))] -= nu.mass(i);
  Scalar tv(0);
  for (const auto& [x, d] : diff) tv += std::abs(d);
  return tv;
}

}  // namespace urot
