#pragma once

#include "oracle/lp_oracle.hpp"
#include "urot/measure.hpp"
#include "urot/metric.hpp"

#include <random>
#include <vector>

namespace testing {

using urot::Index;
using urot::Measure;

// n points uniform in [0, 1]^D with masses uniform in [lo, hi].
inline Measure random_measure(std::mt19937_64& gen, Index n, Index D = 2, double lo = 0.1,
                              double hi = 2.0) {
  std::uniform_real_distribution<double> u(0, 1), w(lo, hi);
  Eigen::MatrixXd P(D, n);
  Eigen::VectorXd m(n);
  for (Index k = 0; k < n; ++k) {
    for (Index d = 0; d < D; ++d) P(d, k) = u(gen);
    m(k) = w(gen);
  }
  return {P, m};
}

inline Measure unit_grid(int side) {
  Eigen::MatrixXd P(2, side * side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) P.col(r * side + c) << (c + 0.5) / side, (r + 0.5) / side;
  return {P, Eigen::VectorXd::Ones(side * side)};
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Euclidean distances between supports, computed without the library metric.
inline std::vector<std::vector<double>> distances(const Measure& a, const Measure& b) {
  std::vector<std::vector<double>> d(a.size(), std::vector<double>(b.size()));
  for (Index i = 0; i < a.size(); ++i)
    for (Index j = 0; j < b.size(); ++j) {
      double s = 0;
      for (Index k = 0; k < a.dim(); ++k) {
        const double t = a.points()(k, i) - b.points()(k, j);
        s += t * t;
      }
      d[i][j] = std::sqrt(s);
    }
  return d;
}

inline double oracle_kr_power(const Measure& a, const Measure& b, double p, double C) {
  return oracle::kr_power(distances(a, b), to_std(a.masses()), to_std(b.masses()), p, C);
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1e-15, std::abs(a), std::abs(b)});
}

}  // namespace testing
