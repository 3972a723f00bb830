// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "support.hpp"
#include "urot/barycenter.hpp"
#include "urot/bounds.hpp"
#include "urot/experiment.hpp"
#include "urot/io.hpp"
#include "urot/kr.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

using namespace urot;
using testing::rel_diff;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Independent sum |mu - nu| over the union of supports.
double tv_oracle(const Measure& a, const Measure& b) {
  std::map<std::pair<double, double>, double> d;
  for (Index i = 0; i < a.size(); ++i) d[{a.point(i)(0), a.point(i)(1)}] += a.mass(i);
  for (Index i = 0; i < b.size(); ++i) d[{b.point(i)(0), b.point(i)(1)}] -= b.mass(i);
  double s = 0;
  for (const auto& [x, v] : d) s += std::abs(v);
  return s;
}

double min_distance(const Measure& a, const Measure& b) {
  const Measure u = combine(a, b);
  double m = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < u.size(); ++i)
    for (Index j = i + 1; j < u.size(); ++j) m = std::min(m, (u.point(i) - u.point(j)).norm());
  return m;
}

Measure with_points(std::mt19937_64& gen, const Measure& base, Index extra) {
  // Shares part of the support of `base` so TV is not just the mass sum.
  const Measure fresh = testing::random_measure(gen, extra);
  std::uniform_real_distribution<double> w(0.1, 2);
  Eigen::MatrixXd P(2, base.size() / 2 + fresh.size());
  Eigen::VectorXd m(P.cols());
  Index k = 0;
  for (Index i = 0; i < base.size() / 2; ++i, ++k) {
    P.col(k) = base.point(i);
    m(k) = w(gen);
  }
  for (Index i = 0; i < fresh.size(); ++i, ++k) {
    P.col(k) = fresh.point(i);
    m(k) = fresh.mass(i);
  }
  return {P, m};
}

// 1. Oracle equivalence of the distance.
Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<int> size(1, 8);
  const double Cs[] = {0.01, 0.1, 1, 10};
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    const Measure a = testing::random_measure(gen, size(gen)), b = testing::random_measure(gen, size(gen));
    const double p = 1 + k % 2, C = Cs[(k / 2) % 4];
    const double got = kr_distance(a, b, p, C).value_p;
    const double want = testing::oracle_kr_power(a, b, p, C);
    worst = std::max(worst, rel_diff(got, want));
  }
  const double secs = seconds_since(t0);
  o.require(worst <= 1e-8, fmt("relative gap %.3g > 1e-8", worst));
  o.require(secs < 30, fmt("%.1f s > 30 s", secs));
  if (o.pass) o.detail = fmt("200 instances, worst relative gap %.2g, %.2f s", worst, secs);
  return o;
}

// 2. TV regime exactness.
Outcome tv_exactness() {
  Outcome o;
  std::mt19937_64 gen(102);
  std::uniform_real_distribution<double> u(0.05, 1);
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    const Measure a = testing::random_measure(gen, 2 + k % 7);
    const Measure b = with_points(gen, a, 1 + k % 5);
    const double p = 1 + k % 3, dmin = min_distance(a, b);
    const double C = k % 4 == 0 ? dmin : dmin * u(gen);
    const double got = kr_distance(a, b, p, C).value_p;
    const double want = std::pow(C, p) / 2 * tv_oracle(a, b);
    worst = std::max(worst, rel_diff(got, want));
  }
  o.require(worst <= 1e-12, fmt("relative gap %.3g > 1e-12", worst));
  if (o.pass) o.detail = fmt("200 pairs, worst relative gap %.2g", worst);
  return o;
}

// 3. Metric axioms, monotonicity, cost-cap invariance and the TV sandwich.
Outcome metric_suite() {
  Outcome o;
  std::mt19937_64 gen(103);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 100; ++k) {
    const Measure a = testing::random_measure(gen, 1 + k % 6), b = testing::random_measure(gen, 2 + k % 5),
                  c = with_points(gen, a, 1 + k % 3);
    const double p = 1 + k % 2, C = 0.05 + 1.5 * u(gen);
    const double ab = kr_distance(a, b, p, C).value, ba = kr_distance(b, a, p, C).value;
    const double ac = kr_distance(a, c, p, C).value, cb = kr_distance(c, b, p, C).value;
    o.require(rel_diff(ab, ba) <= 1e-12, "symmetry");
    o.require(kr_distance(a, a, p, C).value == 0, "identity");
    o.require(ab > 0, "positivity");
    o.require(ab <= ac + cb + 1e-9, "triangle inequality");
    o.require(kr_distance(a, b, p, 0.5 * C).value <= ab * (1 + 1e-12), "monotonicity in C");

    // Capping the ground distance at C leaves the value unchanged.
    const auto d = testing::distances(a, b);
    Eigen::MatrixXd dist(a.size(), b.size()), capped(a.size(), b.size());
    for (Index i = 0; i < a.size(); ++i)
      for (Index j = 0; j < b.size(); ++j) {
        dist(i, j) = d[i][j];
        capped(i, j) = std::min(d[i][j], C);
      }
    const double full = kr_from_distances(dist, a.masses(), b.masses(), p, C).value_p;
    const double cap = kr_from_distances(capped, a.masses(), b.masses(), p, C).value_p;
    o.require(rel_diff(full, cap) <= 1e-12, "cost-cap invariance");

    // Sandwich from first principles.
    double pos = 0, neg = 0, diam = 0;
    std::map<std::pair<double, double>, double> diff;
    for (Index i = 0; i < a.size(); ++i) diff[{a.point(i)(0), a.point(i)(1)}] += a.mass(i);
    for (Index i = 0; i < b.size(); ++i) diff[{b.point(i)(0), b.point(i)(1)}] -= b.mass(i);
    for (const auto& [x, v] : diff) (v > 0 ? pos : neg) += std::abs(v);
    const Measure un = combine(a, b);
    for (Index i = 0; i < un.size(); ++i)
      for (Index j = i + 1; j < un.size(); ++j) diam = std::max(diam, (un.point(i) - un.point(j)).norm());
    const double dmin = min_distance(a, b), Cp = std::pow(C, p), v = std::pow(ab, p);
    const double lower = std::pow(std::min(C, dmin), p) * (pos + neg) / 2;
    const double upper = std::pow(std::min(C, diam), p) * std::min(pos, neg) + Cp / 2 * std::abs(pos - neg);
    o.require(lower <= v * (1 + 1e-12) && v <= upper * (1 + 1e-12), "TV sandwich");
    const auto s = tv_sandwich(a, b, p, C);
    o.require(rel_diff(s.lower, lower) <= 1e-12 && rel_diff(s.upper, upper) <= 1e-12,
              "library sandwich endpoints");
  }
  if (o.pass) o.detail = "100 triples";
  return o;
}

UltrametricTree random_tree(std::mt19937_64& gen, int nodes) {
  std::uniform_real_distribution<double> u(0.2, 0.9);
  std::vector<Index> parent(nodes, -1);
  for (int v = 1; v < nodes; ++v) parent[v] = std::uniform_int_distribution<int>(0, v - 1)(gen);
  std::vector<char> internal(nodes, 0);
  for (int v = 1; v < nodes; ++v) internal[parent[v]] = 1;
  std::vector<double> height(nodes, 0);
  height[0] = 1;
  for (int v = 1; v < nodes; ++v) height[v] = internal[v] ? height[parent[v]] * u(gen) : 0;
  return {parent, height};
}

// 4. Tree closed form and tree upper bound.
Outcome tree_machinery() {
  Outcome o;
  std::mt19937_64 gen(104);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const auto tree = random_tree(gen, 4 + k % 12);
    const Index n = tree.leaf_count();
    std::vector<double> a(n), b(n);
    for (Index i = 0; i < n; ++i) {
      a[i] = u(gen) < 0.3 ? 0 : u(gen);
      b[i] = u(gen) < 0.3 ? 0 : u(gen);
    }
    const double p = 1 + k % 3, C = 0.1 + 2.5 * u(gen);
    const Eigen::MatrixXd D = tree.leaf_distances();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n));
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) dist[i][j] = D(i, j);
    const double want = oracle::kr_power(dist, a, b, p, C);
    const double got = tree_kr(Eigen::Map<Eigen::VectorXd>(a.data(), n), Eigen::Map<Eigen::VectorXd>(b.data(), n),
                               tree, p, C);
    worst = std::max(worst, rel_diff(got, want));
  }
  o.require(worst <= 1e-9, fmt("tree_kr relative gap %.3g > 1e-9", worst));

  int checked = 0;
  for (int k = 0; k < 100; ++k) {
    const Measure a = testing::random_measure(gen, 2 + k % 7), b = testing::random_measure(gen, 2 + k % 6);
    const double q = 2 + k % 2, p = 1 + (k / 2) % 2, C = 0.05 + 1.5 * u(gen);
    const int L = 1 + (k / 4) % 4;
    const double exact = kr_distance(a, b, p, C).value_p;
    const double bound = tree_upper_bound(a, b, q, L, p, C);
    o.require(bound >= exact * (1 - 1e-12), fmt("tree bound %.6g below KR^p %.6g", bound, exact));
    ++checked;
  }
  if (o.pass) o.detail = fmt("100 trees (worst gap %.2g), %.0f bound instances", worst, checked);
  return o;
}

// 5. Monte Carlo E[KR] against the evaluated bound on the 8x8 grid.
Outcome bound_dominance() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig base;
  base.study = Study::bound_vs_empirical;
  base.measures = {testing::unit_grid(8)};
  base.R = 2000;
  base.seed = 105;
  base.p = 1;
  base.C = {0.05, 0.5};

  std::vector<ExperimentConfig> cfgs(3, base);
  cfgs[0].model = SamplerKind::poisson;
  cfgs[0].t = {10, 100, 1000};
  cfgs[0].s = {0.8};
  cfgs[1].model = SamplerKind::multinomial;
  cfgs[1].N = {10, 100, 1000};
  cfgs[2].model = SamplerKind::bernoulli;
  cfgs[2].s = {0.3, 0.6, 0.9};

  int points = 0;
  double tightest = 0;
  for (const auto& cfg : cfgs) {
    const auto t = run_bound_vs_empirical(cfg);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (t.rows[r].estimator != "empirical_kr") continue;
      const auto& emp = t.rows[r];
      double bound = -1;
      for (const auto& row : t.rows)
        if (row.estimator == "bound_kr" && row.params == emp.params) bound = row.mean;
      o.require(bound >= 0, "missing bound row");
      o.require(emp.mean <= bound + 2 * emp.stderr_,
                fmt("E[KR] %.4g exceeds bound %.4g + 2SE", emp.mean, bound));
      tightest = std::max(tightest, emp.mean / bound);
      ++points;
    }
  }
  const double secs = seconds_since(t0);
  o.require(points == 18, "expected 6 grid points per model");
  o.require(secs < 300, fmt("%.0f s > 300 s", secs));
  if (o.pass) o.detail = fmt("18 grid points, largest E[KR]/bound %.3f, %.1f s", tightest, secs);
  return o;
}

// 6. Rate sharpness: multinomial slope and the Poisson absolute-deviation ratio.
Outcome rate_sharpness() {
  Outcome o;
  const Measure grid = testing::unit_grid(8);
  const double C = 0.05, p = 1;  // below the grid spacing: TV regime
  std::vector<double> lx, ly;
  for (const long N : {100L, 1000L, 10000L}) {
    SamplerConfig sc;
    sc.kind = SamplerKind::multinomial;
    sc.N = N;
    sc.seed = 106;
    std::vector<double> v(2000);
    parallel_for(2000, 0, [&](long r) { v[r] = kr_power(draw(grid, sc, r), grid, p, C); });
    lx.push_back(std::log(static_cast<double>(N)));
    ly.push_back(std::log(mean_stderr(v).first));
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int k = 0; k < 3; ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  const double slope = sxy / sxx;
  o.require(std::abs(slope + 0.5) <= 0.1, fmt("slope %.3f outside -0.5 +- 0.1", slope));

  const double t = 1e4;
  SamplerConfig sc;
  sc.t = t;
  sc.s = 1;
  sc.seed = 206;
  std::vector<double> tv(2000);
  parallel_for(2000, 0, [&](long r) { tv[r] = tv_oracle(draw(grid, sc, r), grid); });
  double mad = 0;
  for (Index i = 0; i < grid.size(); ++i) mad += poisson_mad(t * grid.mass(i));
  const double ratio = mean_stderr(tv).first * t / mad;
  o.require(std::abs(ratio - 1) <= 0.05, fmt("Poisson ratio %.4f not within 5%% of 1", ratio));
  if (o.pass) o.detail = fmt("slope %.3f, Poisson ratio %.4f", slope, ratio);
  return o;
}

bool is_barycentric_tuple(const Eigen::VectorXd& y, const std::vector<Measure>& ms, double C) {
  // p = 2: y must be the mean of one point from each of L >= 2 measures
  // that also satisfies both membership inequalities.
  const int J = static_cast<int>(ms.size());
  const double C2 = C * C;
  std::function<bool(int, std::vector<Eigen::VectorXd>&)> search = [&](int i, std::vector<Eigen::VectorXd>& picked) {
    if (i == J) {
      const auto L = static_cast<int>(picked.size());
      if (2 * L < J || L == 0) return false;
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(y.size());
      for (const auto& x : picked) mean += x;
      mean /= L;
      if ((mean - y).norm() > 1e-9) return false;
      double sum = 0;
      for (const auto& x : picked) {
        const double d2 = (x - y).squaredNorm();
        if (d2 > C2 * (1 + 1e-9)) return false;
        sum += d2;
      }
      return sum <= C2 * (2 * L - J) / 2 * (1 + 1e-9) + 1e-15;
    }
    if (search(i + 1, picked)) return true;
    for (Index k = 0; k < ms[i].size(); ++k) {
      picked.push_back(ms[i].point(k));
      const bool ok = search(i + 1, picked);
      picked.pop_back();
      if (ok) return true;
    }
    return false;
  };
  std::vector<Eigen::VectorXd> picked;
  return search(0, picked);
}

// 7. Barycenter correctness.
Outcome barycenter_suite() {
  Outcome o;
  std::mt19937_64 gen(107);
  std::uniform_real_distribution<double> u(0, 1);

  const Measure single = testing::random_measure(gen, 5);
  const auto one = solve_barycenter({single}, 2, 0.3);
  o.require(one.barycenter == single && one.frechet == 0, "J = 1 does not return the input");

  for (int k = 0; k < 50; ++k) {
    std::vector<Measure> ms;
    for (int i = 0; i < 3; ++i) ms.push_back(testing::random_measure(gen, 1 + (k + i) % 5));
    const double C = 0.1 + 0.4 * u(gen);
    const auto sol = solve_barycenter(ms, 2, C);
    for (Index j = 0; j < sol.barycenter.size(); ++j)
      o.require(is_barycentric_tuple(sol.barycenter.point(j), ms, C), "support point outside the centroid set");
    double best = frechet_value(Measure(2), ms, 2, C);
    for (const auto& m : ms) best = std::min(best, frechet_value(m, ms, 2, C));
    o.require(sol.frechet <= best * (1 + 1e-12) + 1e-15, "Frechet value above a trivial candidate");
  }

  // J = 2: the minimal Frechet value is 2^-p KR^p at cost cap 2^((p-1)/p) C,
  // from the pointwise identity min_y |x - y|^p + |y - z|^p = 2^(1-p) |x - z|^p.
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const Measure a = testing::random_measure(gen, 1 + k % 3), b = testing::random_measure(gen, 1 + (k / 3) % 3);
    const double p = 1 + k % 2, C = 0.1 + 0.6 * u(gen);
    const double want = std::pow(2, -p) * testing::oracle_kr_power(a, b, p, std::pow(2, (p - 1) / p) * C);
    worst = std::max(worst, rel_diff(solve_barycenter({a, b}, p, C).frechet, want));
  }
  o.require(worst <= 1e-8, fmt("J = 2 oracle gap %.3g > 1e-8", worst));

  // Common Dirac with masses 1, 2, 5: median mass 2.
  Eigen::MatrixXd x(2, 1);
  x << 0.4, 0.6;
  std::vector<Measure> diracs;
  for (const double m : {1.0, 2.0, 5.0}) diracs.emplace_back(x, Eigen::VectorXd::Constant(1, m));
  for (const double p : {1.0, 2.0}) {
    const double C = 0.7;
    const auto sol = solve_barycenter(diracs, p, C);
    o.require(sol.barycenter.size() == 1 && sol.barycenter.point(0) == x.col(0) &&
                  std::abs(sol.barycenter.mass(0) - 2) <= 1e-12,
              "median-mass law: barycenter mass is not 2");
    const double F = std::pow(C, p) / 2 * (1 + 0 + 3) / 3;
    o.require(rel_diff(sol.frechet, F) <= 1e-12, "median-mass law: Frechet value");
  }
  if (o.pass) o.detail = fmt("50 containment instances, J = 2 oracle gap %.2g", worst);
  return o;
}

// 8. Empirical Frechet deviation against its bound.
Outcome frechet_deviation() {
  Outcome o;
  std::vector<Measure> ms;
  {
    Eigen::MatrixXd A(2, 3), B(2, 3), Cm(2, 3);
    A << 0.1, 0.3, 0.2,
         0.1, 0.2, 0.4;
    B << 0.15, 0.35, 0.6,
         0.12, 0.25, 0.5;
    Cm << 0.05, 0.3, 0.5,
          0.2, 0.2, 0.45;
    ms = {Measure(A, Eigen::Vector3d(1, 2, 1)), Measure(B, Eigen::Vector3d(1, 1, 1)),
          Measure(Cm, Eigen::Vector3d(2, 1, 1))};
  }
  const double p = 2, C = 0.3;
  const double F = solve_barycenter(ms, p, C).frechet;
  const std::pair<double, double> settings[] = {{10, 0.9}, {50, 0.5}, {200, 1.0}};
  std::string detail;
  std::uint64_t seed = 108;
  for (const auto& [t, s] : settings) {
    SamplerConfig sc;
    sc.t = t;
    sc.s = s;
    sc.seed = seed++;
    std::vector<double> dev(200);
    parallel_for(200, 0, [&](long r) {
      std::vector<Measure> hat;
      for (std::uint64_t i = 0; i < 3; ++i) hat.push_back(draw(ms[i], sc, static_cast<std::uint64_t>(r) * 3 + i));
      dev[r] = std::abs(solve_barycenter(hat, p, C).frechet - F);
    });
    const double mean = mean_stderr(dev).first;
    const double bound = frechet_deviation_bound(ms, p, C, {t, t, t}, {s, s, s});
    o.require(mean <= bound, fmt("t = %g: E|dF| %.4g exceeds bound %.4g", t, mean, bound));
    detail += fmt("(t=%g: %.3g <= %.3g) ", t, mean, bound);
  }
  if (o.pass) o.detail = detail;
  return o;
}

// 9. Qualitative trends on a desk-scale PI instance.
Outcome error_trends() {
  Outcome o;
  ExperimentConfig cfg;
  DatasetSpec spec = default_params(DatasetClass::PI);
  spec.M = 100;
  spec.J = 2;
  spec.seed = 109;
  cfg.dataset = spec;
  cfg.R = 500;
  cfg.seed = 209;
  cfg.p = 1;
  cfg.C = {0.01, 0.1, 1, 10};
  cfg.model = SamplerKind::poisson;
  cfg.t = {50};
  cfg.s = {0.9};
  const auto poisson = run_kr_error(cfg);
  const double lo = poisson.rows.front().mean, hi = poisson.rows.back().mean;
  o.require(hi >= 10 * lo, fmt("Poisson error ratio C=10 / C=0.01 is %.2f < 10", hi / lo));

  cfg.model = SamplerKind::multinomial;
  cfg.N = {100};
  const auto multi = run_kr_error(cfg);
  std::string trend;
  for (std::size_t k = 0; k < multi.rows.size(); ++k) {
    trend += fmt("%.3g ", multi.rows[k].mean);
    if (k > 0) o.require(multi.rows[k].mean < multi.rows[k - 1].mean, "multinomial error not decreasing in C");
  }
  if (!o.pass) o.detail += " [multinomial errors " + trend + "]";
  if (o.pass) o.detail = fmt("Poisson ratio %.1f, ", hi / lo) + "multinomial errors " + trend;
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Reproducibility and lossless formats.
Outcome reproducibility() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "urot_acceptance";
  std::filesystem::create_directories(dir);
  ExperimentConfig cfg = parse_config(R"({
    "study": "kr-error", "p": 2, "C": [0.05, 0.5], "R": 40, "seed": 110,
    "dataset": {"class": "PI", "J": 2, "M": 30, "seed": 5},
    "sampler": {"model": "poisson", "t": [10, 100], "s": 0.7}
  })");
  emit(run_study(cfg), (dir / "a.csv").string());
  cfg.threads = 1;
  emit(run_study(cfg), (dir / "b.csv").string());
  const std::string a = slurp((dir / "a.csv").string());
  o.require(!a.empty() && a == slurp((dir / "b.csv").string()), "CSV output differs between runs");

  std::mt19937_64 gen(110);
  for (int k = 0; k < 20; ++k) {
    Measure mu = testing::random_measure(gen, 1 + k * 5, 1 + k % 3);
    std::stringstream ms;
    write_measure_csv(ms, mu);
    o.require(read_measure_csv(ms) == mu, "measure CSV round trip");

    const Measure nu = testing::random_measure(gen, 1 + k % 7, mu.dim());
    const auto plan = kr_distance(mu, nu, 1, 0.4).augmented;
    std::stringstream ps;
    write_plan_csv(ps, plan);
    const TransportPlan back = read_plan_csv(ps);
    bool same = back.entries.size() == plan.entries.size();
    for (std::size_t e = 0; same && e < plan.entries.size(); ++e)
      same = back.entries[e].source == plan.entries[e].source && back.entries[e].sink == plan.entries[e].sink &&
             back.entries[e].mass == plan.entries[e].mass;
    o.require(same, "plan CSV round trip");
  }

  std::istringstream rs(a);
  const ResultTable table = read_table_csv(rs);
  std::ostringstream again;
  write_table_csv(again, table);
  o.require(again.str() == a, "result CSV round trip");
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = "CSV bytes identical across thread counts; measure, plan and result CSVs lossless";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"oracle equivalence of the distance", oracle_equivalence},
      {"TV regime exactness", tv_exactness},
      {"metric and structure suite", metric_suite},
      {"tree machinery", tree_machinery},
      {"bound dominance on the 8x8 grid", bound_dominance},
      {"rate sharpness", rate_sharpness},
      {"barycenter correctness", barycenter_suite},
      {"empirical Frechet deviation", frechet_deviation},
      {"qualitative trends at desk scale", error_trends},
      {"reproducibility and formats", reproducibility},
  };
  int failed = 0, k = 0;
  for (const auto& [name, run] : criteria) {
    ++k;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
