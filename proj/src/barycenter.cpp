#include "urot/barycenter.hpp"

#include "urot/dense_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

namespace urot {

namespace {

double spread(const Eigen::MatrixXd& pts) {
  const Eigen::VectorXd lo = pts.rowwise().minCoeff(), hi = pts.rowwise().maxCoeff();
  return std::max((hi - lo).maxCoeff(), 1e-300);
}

double objective(const Eigen::MatrixXd& pts, const Eigen::VectorXd& y, double p) {
  return (pts.colwise() - y).colwise().norm().array().pow(p).sum();
}

Eigen::VectorXd weiszfeld(const Eigen::MatrixXd& pts, double scale) {
  const Index n = pts.cols();
  Eigen::VectorXd y = pts.rowwise().mean();
  const double stop = 1e-10 * scale, anchor_tol = 1e-14 * scale;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd num = Eigen::VectorXd::Zero(y.size()), pull = num;
    double den = 0;
    bool anchored = false;
    for (Index i = 0; i < n; ++i) {
      const double d = (pts.col(i) - y).norm();
      if (d <= anchor_tol) {
        anchored = true;
        continue;
      }
      num += pts.col(i) / d;
      pull += (pts.col(i) - y) / d;
      den += 1 / d;
    }
    if (den == 0) return y;
    Eigen::VectorXd next = num / den;
    if (anchored) {
      // Vardi-Zhang: stay at the anchor unless the others pull harder than 1.
      const double r = pull.norm();
      if (r <= 1) return y;
      next = (1 - 1 / r) * next + (1 / r) * y;
    }
    const double step = (next - y).norm();
    y = next;
    if (step <= stop) break;
  }
  return y;
}

Eigen::VectorXd reweighted(const Eigen::MatrixXd& pts, double p, double scale) {
  const Index n = pts.cols();
  Eigen::VectorXd y = pts.rowwise().mean();
  double f = objective(pts, y, p);
  const double stop = 1e-10 * scale, floor = 1e-12 * scale;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd num = Eigen::VectorXd::Zero(y.size());
    double den = 0;
    for (Index i = 0; i < n; ++i) {
      const double w = std::pow(std::max((pts.col(i) - y).norm(), floor), p - 2);
      num += w * pts.col(i);
      den += w;
    }
    Eigen::VectorXd dir = num / den - y;
    double fn = objective(pts, y + dir, p);
    for (int k = 0; k < 60 && fn > f; ++k) {
      dir /= 2;
      fn = objective(pts, y + dir, p);
    }
    if (fn > f) break;
    y += dir;
    f = fn;
    if (dir.norm() <= stop) break;
  }
  return y;
}

struct Enumerator {
  const std::vector<Measure>& ms;
  double p, C;
  CentroidOptions opts;
  int J;
  std::vector<int> subset;
  Generators tuple;
  Eigen::MatrixXd gens;
  std::vector<Eigen::VectorXd> found;
  std::vector<Generators> origin;

  void visit(std::size_t depth) {
    if (depth == subset.size()) {
      const Eigen::VectorXd y = barycentric_point(gens, p);
      if (!restricted_member(y, gens, J, p, C)) return;
      if (found.size() >= opts.cap)
        throw CapExceeded("centroid set exceeds the cap of " + std::to_string(opts.cap) +
                          " candidates");
      found.push_back(y);
      origin.push_back(tuple);
      return;
    }
    const Measure& mu = ms[subset[depth]];
    for (Index k = 0; k < mu.size(); ++k) {
      bool ok = true;
      if (opts.prune)
        for (std::size_t l = 0; l < depth && ok; ++l)
          ok = (gens.col(static_cast<Index>(l)) - mu.point(k)).norm() <= 2 * C * (1 + 1e-12);
      if (!ok) continue;
      gens.col(static_cast<Index>(depth)) = mu.point(k);
      tuple[depth] = {subset[depth], k};
      visit(depth + 1);
    }
  }
};

}  // namespace

Eigen::VectorXd barycentric_point(const Eigen::MatrixXd& points, double p) {
  if (!(p >= 1)) throw Error("barycentric point: p must be >= 1");
  if (points.cols() == 0) throw Error("barycentric point: empty point list");
  if (points.cols() == 1) return points.col(0);
  if (p == 2) return points.rowwise().mean();
  const double scale = spread(points);
  return p == 1 ? weiszfeld(points, scale) : reweighted(points, p, scale);
}

bool restricted_member(const Eigen::VectorXd& y, const Eigen::MatrixXd& gens, int J, double p,
                       double C, double rel_tol) {
  const double cp = std::pow(C, p), slack = rel_tol * cp;
  const auto L = static_cast<double>(gens.cols());
  double sum = 0;
  for (Index l = 0; l < gens.cols(); ++l) {
    const double dp = std::pow((gens.col(l) - y).norm(), p);
    if (dp > cp + slack) return false;
    sum += dp;
  }
  return sum <= cp * (2 * L - J) / 2 + slack;
}

CentroidSet restricted_centroid_set(const std::vector<Measure>& measures, double p, double C,
                                    CentroidOptions opts) {
  validate_penalty(p, C);
  const int J = static_cast<int>(measures.size());
  if (J < 1) throw Error("centroid set: need at least one measure");
  Index D = -1;
  for (const auto& m : measures)
    if (!m.empty()) {
      if (D >= 0 && m.dim() != D) throw Error("centroid set: dimension mismatch");
      D = m.dim();
    }
  CentroidSet out;
  if (D < 0) {
    out.points.resize(measures.front().dim(), 0);
    return out;
  }
  Enumerator en{measures, p, C, opts, J, {}, {}, {}, {}, {}};
  for (int L = (J + 1) / 2; L <= J; ++L) {
    // Subsets of L measures in lexicographic order.
    std::vector<int> pick(L);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      en.subset = pick;
      en.tuple.assign(L, {0, 0});
      en.gens.resize(D, L);
      en.visit(0);
      int k = L - 1;
      while (k >= 0 && pick[k] == J - L + k) --k;
      if (k < 0) break;
      ++pick[k];
      for (int r = k + 1; r < L; ++r) pick[r] = pick[r - 1] + 1;
    }
  }

  // Merge candidates closer than 1e-12 (sup norm), keeping the first found.
  std::vector<std::size_t> order(en.found.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return en.found[a](0) < en.found[b](0) || (en.found[a](0) == en.found[b](0) && a < b);
  });
  std::vector<char> dead(en.found.size(), 0);
  for (std::size_t u = 0; u < order.size(); ++u) {
    if (dead[order[u]]) continue;
    for (std::size_t v = u + 1; v < order.size(); ++v) {
      const auto& a = en.found[order[u]];
      const auto& b = en.found[order[v]];
      if (b(0) - a(0) > 1e-12) break;
      if (!dead[order[v]] && (a - b).cwiseAbs().maxCoeff() <= 1e-12) {
        dead[std::max(order[u], order[v])] = 1;
        if (order[v] < order[u]) break;
      }
    }
  }
  Index K = 0;
  for (const char d : dead) K += !d;
  out.points.resize(D, K);
  Index k = 0;
  for (std::size_t i = 0; i < en.found.size(); ++i) {
    if (dead[i]) continue;
    out.points.col(k++) = en.found[i];
    out.generators.push_back(en.origin[i]);
  }
  return out;
}

double frechet_value(const Measure& candidate, const std::vector<Measure>& measures, double p,
                     double C) {
  validate_penalty(p, C);
  if (measures.empty()) throw Error("frechet value: no measures");
  std::vector<std::future<double>> parts;
  for (const auto& mu : measures)
    parts.push_back(std::async(std::launch::async, [&mu, &candidate, p, C] {
      return kr_distance(mu, candidate, p, C).value_p;
    }));
  double sum = 0;
  for (auto& f : parts) sum += f.get();
  return sum / static_cast<double>(measures.size());
}

BarycenterSolution solve_barycenter(const std::vector<Measure>& measures, double p, double C,
                                    CentroidOptions opts) {
  validate_penalty(p, C);
  BarycenterSolution sol;
  sol.centroids = restricted_centroid_set(measures, p, C, opts);
  const int J = static_cast<int>(measures.size());
  const Index K = sol.centroids.size(), Kd = K + 1;
  const double cp = std::pow(C, p);
  double B = 0;
  for (const auto& m : measures) B += m.total_mass();

  // One measure is its own barycenter; the candidates are exactly its support.
  if (J == 1) {
    const Measure& mu = measures.front();
    sol.barycenter = mu;
    sol.weights = Eigen::VectorXd::Zero(Kd);
    TransportPlan plan;
    plan.includes_dummy = true;
    plan.rows = K;
    plan.cols = mu.size();
    for (Index j = 0; j < K; ++j)
      for (Index k = 0; k < mu.size(); ++k)
        if (sol.centroids.points.col(j) == mu.point(k)) {
          sol.weights(j) = mu.mass(k);
          plan.entries.push_back({j, k, mu.mass(k)});
        }
    sol.plans.push_back(std::move(plan));
    return sol;
  }

  // Variable layout: pi^(i) row-major over (candidate j, point k), then a.
  std::vector<Index> offset{0};
  std::vector<Index> width;
  for (const auto& m : measures) {
    width.push_back(m.size() + 1);
    offset.push_back(offset.back() + Kd * width.back());
  }
  const Index nvar = offset.back() + Kd;
  Index nrow = J * Kd;
  for (const Index w : width) nrow += w;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nrow, nvar);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nrow), c = Eigen::VectorXd::Zero(nvar);
  Index row = 0;
  for (int i = 0; i < J; ++i) {
    const Measure& mu = measures[i];
    const Index w = width[i];
    for (Index j = 0; j < Kd; ++j) {
      for (Index k = 0; k < w; ++k) {
        const Index var = offset[i] + j * w + k;
        double cost = 0;
        if (j < K && k < w - 1)
          cost = std::min(std::pow((sol.centroids.points.col(j) - mu.point(k)).norm(), p), cp);
        else if (j < K || k < w - 1)
          cost = cp / 2;
        c(var) = cost / J;
        A(row, var) = 1;
      }
      A(row, offset[J] + j) = -1;
      ++row;
    }
    for (Index k = 0; k < w; ++k) {
      for (Index j = 0; j < Kd; ++j) A(row, offset[i] + j * w + k) = 1;
      b(row) = k < w - 1 ? mu.mass(k) : B - mu.total_mass();
      ++row;
    }
  }

  const auto lp = solve_lp<double>(A, b, c);
  if (lp.status != LpStatus::optimal) throw Error("barycenter LP did not reach an optimum");
  sol.iterations = lp.iterations;
  sol.lp_objective = lp.objective;
  sol.weights = lp.x.tail(Kd);
  const Eigen::VectorXd resid = A * lp.x - b;
  sol.max_residual = resid.size() ? resid.cwiseAbs().maxCoeff() / std::max(B, 1e-300) : 0;

  std::vector<Index> keep;
  for (Index j = 0; j < K; ++j)
    if (sol.weights(j) > 1e-12) keep.push_back(j);
  const Index D = sol.centroids.points.rows();
  Eigen::MatrixXd pts(D, static_cast<Index>(keep.size()));
  Eigen::VectorXd mass(static_cast<Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    pts.col(static_cast<Index>(r)) = sol.centroids.points.col(keep[r]);
    mass(static_cast<Index>(r)) = sol.weights(keep[r]);
  }
  sol.barycenter = keep.empty() ? Measure(D) : Measure(pts, mass);

  for (int i = 0; i < J; ++i) {
    TransportPlan plan;
    plan.includes_dummy = true;
    plan.rows = K;
    plan.cols = width[i] - 1;
    for (Index j = 0; j < Kd; ++j)
      for (Index k = 0; k < width[i]; ++k) {
        const double f = lp.x(offset[i] + j * width[i] + k);
        if (f > 0)
          plan.entries.push_back({j < K ? j : kDummy, k < width[i] - 1 ? k : kDummy, f});
      }
    sol.plans.push_back(std::move(plan));
  }
  sol.frechet = frechet_value(sol.barycenter, measures, p, C);
  return sol;
}

}  // namespace urot
