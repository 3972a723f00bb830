#include "support.hpp"
#include "urot/dense_simplex.hpp"
#include "urot/kr.hpp"

#include <doctest.h>

using namespace urot;
using testing::rel_diff;

namespace {

Measure dirac(double x, double m = 1) {
  Eigen::MatrixXd P(1, 1);
  P << x;
  return {P, Eigen::VectorXd::Constant(1, m)};
}

// Balanced OT through the oracle: min c.x, rows <= a, cols <= b, with the
// mass forced by a large negative shift on every arc.
double oracle_balanced(const Eigen::MatrixXd& cost, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b) {
  const Index m = cost.rows(), n = cost.cols();
  const double shift = 10 * (cost.cwiseAbs().maxCoeff() + 1);
  std::vector<std::vector<double>> A(m + n, std::vector<double>(m * n, 0.0));
  std::vector<double> rhs(m + n), c(m * n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      A[i][i * n + j] = A[m + j][i * n + j] = 1;
      c[i * n + j] = cost(i, j) - shift;
    }
  for (Index i = 0; i < m; ++i) rhs[i] = a(i);
  for (Index j = 0; j < n; ++j) rhs[m + j] = b(j);
  return oracle::solve_le(A, rhs, c).value + shift * a.sum();
}

}  // namespace

TEST_CASE("transport simplex: small exact cases") {
  const auto one = solve_transport<double>(Eigen::MatrixXd::Constant(1, 1, 2.5),
                                           Eigen::VectorXd::Constant(1, 3),
                                           Eigen::VectorXd::Constant(1, 3));
  CHECK(one.objective == doctest::Approx(7.5));

  Eigen::Matrix2d cost;
  cost << 0, 1, 1, 0;
  const auto diag = solve_transport<double>(cost, Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 1));
  CHECK(diag.objective == doctest::Approx(0).epsilon(1e-15));
  for (const auto& arc : diag.basis)
    if (arc.flow > 0) CHECK(arc.source == arc.sink);

  CHECK_THROWS_AS(solve_transport<double>(cost, Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 2)), Error);
}

TEST_CASE("transport simplex: random instances match the oracle and certify") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    const Index m = 2 + trial % 6, n = 2 + (trial * 5) % 7;
    Eigen::MatrixXd cost(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) cost(i, j) = u(gen);
    Eigen::VectorXd a(m), b(n);
    for (Index i = 0; i < m; ++i) a(i) = 0.1 + u(gen);
    for (Index j = 0; j < n; ++j) b(j) = 0.1 + u(gen);
    b *= a.sum() / b.sum();
    const auto sol = solve_transport<double>(cost, a, b);
    CHECK(rel_diff(sol.objective, oracle_balanced(cost, a, b)) < 1e-8);
    CHECK(sol.min_reduced_cost >= -1e-9 * cost.maxCoeff());
    CHECK(static_cast<Index>(sol.basis.size()) == m + n - 1);
  }
}

TEST_CASE("transport simplex: heavy degeneracy still terminates") {
  // Integer masses on an assignment-like problem with many equal costs.
  const Index n = 12;
  Eigen::MatrixXd cost(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) cost(i, j) = static_cast<double>((i * 7 + j * 3) % 4);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  TransportOptions opts;
  opts.bland_after = 1;
  const auto sol = solve_transport<double>(cost, ones, ones, opts);
  CHECK(sol.objective == doctest::Approx(oracle_balanced(cost, ones, ones)));
  CHECK(sol.used_bland);
}

TEST_CASE("dense simplex: textbook and degenerate programs") {
  // min -x - y, x + 2y + s1 = 4, 3x + y + s2 = 6 -> (1.6, 1.2).
  Eigen::MatrixXd A(2, 4);
  A << 1, 2, 1, 0,
       3, 1, 0, 1;
  const auto r = solve_lp<double>(A, Eigen::Vector2d(4, 6), Eigen::Vector4d(-1, -1, 0, 0));
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(-2.8));
  CHECK(r.x(0) == doctest::Approx(1.6));

  // Redundant equality rows.
  Eigen::MatrixXd R(3, 2);
  R << 1, 1,
       2, 2,
       1, 0;
  const auto red = solve_lp<double>(R, Eigen::Vector3d(1, 2, 0.25), Eigen::Vector2d(1, 2));
  REQUIRE(red.status == LpStatus::optimal);
  CHECK(red.objective == doctest::Approx(1.75));

  Eigen::MatrixXd F(2, 1);
  F << 1, 1;
  CHECK(solve_lp<double>(F, Eigen::Vector2d(1, 2), Eigen::VectorXd::Ones(1)).status ==
        LpStatus::infeasible);

  Eigen::MatrixXd U(1, 2);
  U << 1, -1;
  CHECK(solve_lp<double>(U, Eigen::VectorXd::Ones(1), Eigen::Vector2d(0, -1)).status ==
        LpStatus::unbounded);
}

TEST_CASE("dense simplex: agrees with the oracle on random transport LPs") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 15; ++trial) {
    const Index m = 2 + trial % 4, n = 3 + trial % 3;
    Eigen::MatrixXd cost(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) cost(i, j) = u(gen);
    Eigen::VectorXd a = Eigen::VectorXd::Ones(m), b = Eigen::VectorXd::Constant(n, double(m) / n);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + n, m * n);
    Eigen::VectorXd rhs(m + n), c(m * n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) {
        A(i, i * n + j) = A(m + j, i * n + j) = 1;
        c(i * n + j) = cost(i, j);
      }
    rhs << a, b;
    const auto r = solve_lp<double>(A, rhs, c);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(rel_diff(r.objective, oracle_balanced(cost, a, b)) < 1e-9);
  }
}

TEST_CASE("kr: augmented problem layout") {
  const Measure d0 = dirac(0);
  const auto aug = augment(d0, d0, 2, 0.5);
  REQUIRE(aug.cost.rows() == 2);
  REQUIRE(aug.cost.cols() == 2);
  CHECK(aug.source.sum() == 2);
  CHECK(aug.sink.sum() == 2);
  CHECK(aug.cost(0, 0) == 0);
  CHECK(aug.cost(0, 1) == 0.125);
  CHECK(aug.cost(1, 0) == 0.125);
  CHECK(aug.cost(1, 1) == 0);

  const auto side = augment(Measure(1), dirac(3), 1, 1);
  REQUIRE(side.source.size() == 1);
  CHECK(side.source(0) == 1);
  REQUIRE(side.sink.size() == 2);
  CHECK(side.sink(0) == 1);
  CHECK(side.sink(1) == 0);

  std::mt19937_64 gen(9);
  const Measure a = testing::random_measure(gen, 3), b = testing::random_measure(gen, 4);
  const auto r = augment(a, b, 1, 0.3);
  CHECK(r.source.sum() == doctest::Approx(a.total_mass() + b.total_mass()));
  CHECK(r.sink.sum() == doctest::Approx(a.total_mass() + b.total_mass()));
}

TEST_CASE("kr: two-point analytic values") {
  const Measure a = dirac(0), b = dirac(1);
  CHECK(kr_distance(a, b, 1, 0.5).value == doctest::Approx(0.5));
  CHECK(kr_distance(a, b, 1, 4).value == doctest::Approx(1));
  CHECK(kr_distance(a, a, 2, 1).value == 0);
  for (const double p : {1.0, 2.0, 3.0}) {
    const double v = kr_distance(dirac(0, 2), dirac(0, 1), p, 0.7).value_p;
    CHECK(v == doctest::Approx(std::pow(0.7, p) / 2));
  }
  CHECK(kr_distance(Measure(1), Measure(1), 1, 1).value == 0);
  CHECK(kr_distance(Measure(1), dirac(2, 3), 2, 0.5).value_p == doctest::Approx(0.25 * 3 / 2));
  CHECK_THROWS_AS(kr_distance(a, b, 0.5, 1), Error);
  CHECK_THROWS_AS(kr_distance(a, b, 1, 0), Error);
}

TEST_CASE("kr: random 5 vs 7 instance matches the LP oracle") {
  std::mt19937_64 gen(21);
  const Measure a = testing::random_measure(gen, 5), b = testing::random_measure(gen, 7);
  const auto r = kr_distance(a, b, 2, 0.3);
  CHECK(rel_diff(r.value_p, testing::oracle_kr_power(a, b, 2, 0.3)) < 1e-8);
}

TEST_CASE("kr: returned plan is a feasible sub-coupling achieving the value") {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Measure a = testing::random_measure(gen, 6), b = testing::random_measure(gen, 5);
    const double C = trial % 2 ? 0.2 : 0.6;
    const auto r = kr_distance(a, b, 1, C);
    CHECK_FALSE(r.plan.includes_dummy);
    const Eigen::VectorXd rows = r.plan.row_sums(), cols = r.plan.col_sums();
    CHECK((rows.array() <= a.masses().array() + 1e-12).all());
    CHECK((cols.array() <= b.masses().array() + 1e-12).all());
    for (const auto& e : r.plan.entries) CHECK((a.point(e.source) - b.point(e.sink)).norm() <= C + 1e-12);
    CHECK(rel_diff(plan_objective(r.plan, a, b, 1, C), r.value_p) < 1e-10);
  }
}

TEST_CASE("kr: TV fast path") {
  CHECK(kr_distance_tv_fastpath(dirac(0), dirac(1), 1, 0.5) == doctest::Approx(0.5));
  CHECK(kr_distance_tv_fastpath(dirac(0), dirac(0), 1, 0.5) == 0);
  CHECK_THROWS_AS(kr_distance_tv_fastpath(dirac(0), dirac(1), 1, 2), Error);
}

TEST_CASE("kr: chebyshev metric") {
  Eigen::MatrixXd x(2, 1), y(2, 1);
  x << 0, 0;
  y << 0.3, 0.4;
  const Measure a(x, Eigen::VectorXd::Ones(1)), b(y, Eigen::VectorXd::Ones(1));
  CHECK(kr_distance(a, b, 1, 10, GroundMetric::chebyshev()).value == doctest::Approx(0.4));
  CHECK(kr_distance(a, b, 1, 10).value == doctest::Approx(0.5));
}

TEST_CASE("kr: TV sandwich holds on random pairs") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Measure a = testing::random_measure(gen, 4), b = testing::random_measure(gen, 5);
    const double C = 0.05 + 0.5 * (trial % 5), p = 1 + trial % 2;
    const auto s = tv_sandwich(a, b, p, C);
    const double v = kr_distance(a, b, p, C).value_p;
    CHECK(s.lower <= v * (1 + 1e-12) + 1e-15);
    CHECK(v <= s.upper * (1 + 1e-12) + 1e-15);
  }
}
