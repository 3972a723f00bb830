#pragma once

#include "urot/measure.hpp"

#include <algorithm>
#include <limits>
#include <string_view>

namespace urot {

enum class MetricKind { euclidean, chebyshev, explicit_matrix };

/// Ground metric on the support points.
///
/// For the explicit kind the measure coordinates are 1-D and hold the
/// row/column index of the point in the distance matrix.
template <typename Scalar>
class BasicGroundMetric {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Points = Matrix;

  BasicGroundMetric() = default;

  static BasicGroundMetric euclidean() { return BasicGroundMetric(MetricKind::euclidean); }
  static BasicGroundMetric chebyshev() { return BasicGroundMetric(MetricKind::chebyshev); }

  static BasicGroundMetric from_matrix(Matrix d) {
    if (d.rows() != d.cols()) throw Error("explicit metric: matrix is not square");
    for (Index i = 0; i < d.rows(); ++i) {
      if (d(i, i) != Scalar(0)) throw Error("explicit metric: nonzero diagonal");
      for (Index j = 0; j < d.cols(); ++j) {
        if (!(d(i, j) >= Scalar(0))) throw Error("explicit metric: negative entry");
        if (d(i, j) != d(j, i)) throw Error("explicit metric: matrix is not symmetric");
      }
    }
    BasicGroundMetric m(MetricKind::explicit_matrix);
    m.matrix_ = std::move(d);
    return m;
  }

  static BasicGroundMetric parse(std::string_view name) {
    if (name == "euclidean" || name == "l2") return euclidean();
    if (name == "chebyshev" || name == "linf") return chebyshev();
    throw Error("unknown metric '" + std::string(name) + "'");
  }

  MetricKind kind() const { return kind_; }
  const Matrix& matrix() const { return matrix_; }

  template <typename A, typename B>
  Scalar operator()(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) const {
    switch (kind_) {
      case MetricKind::euclidean:
        return (x - y).norm();
      case MetricKind::chebyshev:
        return (x - y).cwiseAbs().maxCoeff();
      case MetricKind::explicit_matrix:
        return matrix_(index_of(x(0)), index_of(y(0)));
    }
    return Scalar(0);
  }

  /// |a| x |b| matrix of distances between point columns.
  Matrix pairwise(const Points& a, const Points& b) const {
    Matrix d(a.cols(), b.cols());
    for (Index i = 0; i < a.cols(); ++i)
      for (Index j = 0; j < b.cols(); ++j) d(i, j) = (*this)(a.col(i), b.col(j));
    return d;
  }

  /// Exhaustive triangle-inequality check for explicit matrices; other
  /// kinds are metrics by construction.
  bool satisfies_triangle_inequality(Scalar tol = Scalar(1e-12)) const {
    if (kind_ != MetricKind::explicit_matrix) return true;
    const Index n = matrix_.rows();
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k)
          if (matrix_(i, j) > matrix_(i, k) + matrix_(k, j) + tol) return false;
    return true;
  }

 private:
  explicit BasicGroundMetric(MetricKind k) : kind_(k) {}

  Index index_of(Scalar c) const {
    const auto i = static_cast<Index>(c);
    if (static_cast<Scalar>(i) != c || i < 0 || i >= matrix_.rows())
      throw Error("explicit metric: coordinate is not a valid point index");
    return i;
  }

  MetricKind kind_ = MetricKind::euclidean;
  Matrix matrix_;
};

using GroundMetric = BasicGroundMetric<double>;

template <typename Scalar>
Scalar diameter(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& points,
                const BasicGroundMetric<Scalar>& metric) {
  Scalar diam(0);
  for (Index i = 0; i < points.cols(); ++i)
    for (Index j = i + 1; j < points.cols(); ++j)
      diam = std::max(diam, metric(points.col(i), points.col(j)));
  return diam;
}

/// Minimum distance between distinct points; +inf with fewer than two points.
template <typename Scalar>
Scalar min_distance(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& points,
                    const BasicGroundMetric<Scalar>& metric) {
  Scalar dmin = std::numeric_limits<Scalar>::infinity();
  for (Index i = 0; i < points.cols(); ++i)
    for (Index j = i + 1; j < points.cols(); ++j)
      dmin = std::min(dmin, metric(points.col(i), points.col(j)));
  return dmin;
}

/// Support points of mu and nu side by side (duplicates merged).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> support_union(
    const BasicMeasure<Scalar>& mu, const BasicMeasure<Scalar>& nu) {
  return combine(mu, nu).points();
}

}  // namespace urot
