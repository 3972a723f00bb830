#include "urot/bounds.hpp"

#include "urot/kr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace urot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double phi_tv(double t, double s, const Measure& mu) {
  return 2 * (1 - s) * mu.total_mass() + s / std::sqrt(t) * mu.masses().array().sqrt().sum();
}

double phi_var(double t, double s, const Measure& mu) {
  if (s == 0) return kInf;
  return std::sqrt(mu.total_mass() / (s * t) + (1 - s) / s * mu.masses().squaredNorm());
}

double psi_tv(const Eigen::VectorXd& s_x, const Measure& mu) {
  return 2 * (mu.masses().array() * (1 - s_x.array())).sum();
}

double psi_var(const Eigen::VectorXd& s_x, const Measure& mu) {
  double v = 0;
  for (Index i = 0; i < mu.size(); ++i) {
    if (s_x(i) == 0) return kInf;
    v += mu.mass(i) * mu.mass(i) * (1 - s_x(i)) / s_x(i);
  }
  return std::sqrt(v);
}

void check_poisson(double t, double s) {
  if (!(t > 0) || !std::isfinite(t)) throw Error("poisson model: t must be > 0");
  if (!(s >= 0 && s <= 1)) throw Error("poisson model: s must lie in [0, 1]");
}

void check_bernoulli(const Eigen::VectorXd& s_x, const Measure& mu) {
  if (s_x.size() != mu.size())
    throw Error("bernoulli model: success vector length " + std::to_string(s_x.size()) +
                " does not match the support size " + std::to_string(mu.size()));
  for (Index i = 0; i < s_x.size(); ++i)
    if (!(s_x(i) >= 0 && s_x(i) <= 1)) throw Error("bernoulli model: s_x must lie in [0, 1]");
}

}  // namespace

Model parse_model(const std::string& name) {
  if (name == "poisson") return Model::poisson;
  if (name == "multinomial") return Model::multinomial;
  if (name == "bernoulli") return Model::bernoulli;
  throw Error("unknown model '" + name + "'");
}

std::string to_string(Model m) {
  switch (m) {
    case Model::poisson: return "poisson";
    case Model::multinomial: return "multinomial";
    case Model::bernoulli: return "bernoulli";
  }
  return "?";
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::large_c: return "large-C";
    case Branch::intermediate: return "intermediate";
    case Branch::tv: return "tv";
  }
  return "?";
}

double phi(double t, double s, const Measure& mu, double C, double dmin) {
  check_poisson(t, s);
  return C <= dmin ? phi_tv(t, s, mu) : phi_var(t, s, mu);
}

double psi(const Eigen::VectorXd& s_x, const Measure& mu, double C, double dmin) {
  check_bernoulli(s_x, mu);
  return C <= dmin ? psi_tv(s_x, mu) : psi_var(s_x, mu);
}

double poisson_mad(double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw Error("poisson_mad: lambda must be > 0");
  const double k = std::floor(lambda);
  return std::exp(std::log(2.0) - lambda + (k + 1) * std::log(lambda) - std::lgamma(k + 1));
}

double a_term(const CoveringHierarchy& h, double p, int l) {
  const double k = p == 1 ? 1.0 : h.q / (h.q - 1);
  double sum = 0;
  for (int j = l; j <= h.L; ++j)
    sum += std::pow(h.q, p - j * p) * std::sqrt(static_cast<double>(h.level_size(j)));
  const double leaves = std::pow(h.q, -h.L * p) * std::sqrt(static_cast<double>(h.level_size(h.L + 1)));
  return std::pow(h.diam, p) * std::pow(2.0, p - 1) * (leaves + std::pow(k, p) * sum);
}

BoundReport deviation_constant(Model model, const Measure& mu, double p, double C, double q, int L,
                               const ModelParams& params, const GroundMetric& metric) {
  validate_penalty(p, C);
  switch (model) {
    case Model::poisson: check_poisson(params.t, params.s); break;
    case Model::multinomial:
      if (params.N < 1) throw Error("multinomial model: N must be >= 1");
      break;
    case Model::bernoulli: check_bernoulli(params.s_x, mu); break;
  }
  if (mu.empty()) throw Error("deviation bound: the measure has empty support");
  const auto h = build_hierarchy(mu.points(), metric, q, L);
  const double dmin = min_distance(mu.points(), metric);
  const double cp = std::pow(C, p), M = mu.total_mass();

  BoundReport r;
  r.model = model;
  r.p = p;
  r.C = C;
  r.q = q;
  r.L = L;
  if (C <= std::max(2 * h.height(L), dmin)) {
    r.branch = Branch::tv;
  } else if (C >= 2 * h.height(0)) {
    r.branch = Branch::large_c;
    r.level = 1;
  } else {
    r.branch = Branch::intermediate;
    for (int l = 1; l <= L; ++l)
      if (2 * h.height(l) <= C && C < 2 * h.height(l - 1)) r.level = l;
    if (r.level == 0) throw Error("deviation bound: no branch selected (internal error)");
  }

  if (r.branch == Branch::tv) {
    r.constant = model == Model::multinomial
                     ? cp / 2 * std::sqrt(M) * mu.masses().array().sqrt().sum()
                     : cp / 2;
  } else {
    r.constant = a_term(h, p, r.level);
    if (model == Model::multinomial)
      r.constant *= M;
    else if (r.branch == Branch::large_c)
      r.constant += cp / 2 - std::pow(2.0, p - 1) * std::pow(h.height(0), p);
  }

  const bool tv = r.branch == Branch::tv;
  switch (model) {
    case Model::poisson:
      r.rate = tv ? phi_tv(params.t, params.s, mu) : phi_var(params.t, params.s, mu);
      break;
    case Model::multinomial: r.rate = 1 / std::sqrt(static_cast<double>(params.N)); break;
    case Model::bernoulli:
      r.rate = tv ? psi_tv(params.s_x, mu) : psi_var(params.s_x, mu);
      break;
  }
  r.bound_kr_p = r.constant * r.rate;
  if (r.constant == 0 || r.rate == 0) r.bound_kr_p = 0;
  r.bound_kr = std::pow(r.bound_kr_p, 1 / p);
  return r;
}

BoundReport optimize_constant(Model model, const Measure& mu, double p, double C,
                              const ModelParams& params, const GroundMetric& metric) {
  if (mu.empty()) throw Error("deviation bound: the measure has empty support");
  const double diam = diameter(mu.points(), metric);
  const double dmin = min_distance(mu.points(), metric);
  BoundReport best;
  bool have = false;
  for (const double q : {1.5, 2.0, 3.0, 4.0}) {
    int lmax = 0;
    if (mu.size() > 1 && dmin > 0)
      lmax = std::min(20, static_cast<int>(std::ceil(std::log(diam / dmin) / std::log(q))));
    for (int L = 0; L <= lmax; ++L) {
      const BoundReport r = deviation_constant(model, mu, p, C, q, L, params, metric);
      if (!have || r.bound_kr_p < best.bound_kr_p ||
          (r.bound_kr_p == best.bound_kr_p && r.constant < best.constant)) {
        best = r;
        have = true;
      }
    }
  }
  return best;
}

int explicit_depth(int D, double /*p*/, double card_x) {
  return static_cast<int>(std::floor(std::log2(card_x) / D));
}

double explicit_euclidean_constant(int D, double p, double C, double card_x, double diam_inf,
                                   double dmin_inf) {
  validate_penalty(p, C);
  if (D < 1) throw Error("explicit constant: D must be >= 1");
  if (!(card_x >= 1)) throw Error("explicit constant: |X| must be >= 1");
  const double pre = std::pow(D, p / 2), cp = std::pow(C, p), dp = std::pow(diam_inf, p);
  const double e = D / 2.0 - p;  // exponent D/2 - p

  if (2 * p > D) {
    // Infinite depth: h(l) = 2^(1-l) diam, and 2h(L) vanishes.
    const double r = std::pow(2.0, e);
    if (C <= dmin_inf) return pre * cp / 2;
    if (C >= 4 * diam_inf)
      return pre * (cp / (2 * std::sqrt(D)) - std::pow(2.0, 2 * p - 1) * dp +
                    dp * std::pow(2.0, 3 * p - 1) * r / (1 - r));
    const int l = static_cast<int>(std::ceil(2 - std::log2(C / diam_inf)));
    if (l < 1) throw Error("explicit constant: parameters outside formula domain");
    return pre * dp * std::pow(2.0, 3 * p - 1) * std::pow(r, l) / (1 - r);
  }

  const int L = explicit_depth(D, p, card_x);
  auto h = [&](int l) { return (std::pow(2.0, 1 - l) - std::pow(2.0, -L)) * diam_inf; };
  const double lg = std::log2(card_x);
  const double shrink = 2 - std::pow(card_x, -1.0 / D);
  if (C <= std::min(2 * h(L), dmin_inf)) return pre * cp / 2;
  int l = -1;
  if (C >= 2 * h(0)) {
    l = 0;
  } else {
    for (int k = 1; k <= L; ++k)
      if (2 * h(k) <= C && C < 2 * h(k - 1)) l = k;
  }
  if (l < 0) throw Error("explicit constant: parameters outside formula domain");
  const double mass_term = cp / (2 * std::sqrt(D)) - std::pow(2.0, p - 1) * std::pow(shrink, p) * dp;

  if (2 * p == D) {
    const double tail = std::pow(2.0, -2 * p) + lg / D;
    if (l == 0) return pre * (mass_term + dp * std::pow(2.0, 3 * p - 1) * tail);
    return pre * dp * std::pow(2.0, 3 * p - 1) * (tail - l);
  }
  const double growth = std::pow(card_x, 0.5 - p / D);
  const double ratio = std::pow(2.0, p + D / 2.0) / (std::pow(2.0, e) - 1);
  if (l == 0) return pre * (mass_term + dp * std::pow(2.0, p - 1) * growth * (1 + ratio));
  return pre * dp * (growth + ratio * (growth - std::pow(2.0, e * (l - 1))));
}

double frechet_deviation_bound(const std::vector<Measure>& measures, double p, double C,
                               const std::vector<double>& t, const std::vector<double>& s,
                               const GroundMetric& metric) {
  validate_penalty(p, C);
  const std::size_t J = measures.size();
  if (J == 0) throw Error("frechet bound: no measures");
  if (t.size() != J || s.size() != J) throw Error("frechet bound: need one (t, s) per measure");
  Measure all = measures.front();
  for (std::size_t i = 1; i < J; ++i) all = combine(all, measures[i]);
  const double diam = diameter(all.points(), metric);
  double sum = 0;
  for (std::size_t i = 0; i < J; ++i) {
    if (measures[i].empty()) continue;
    ModelParams mp;
    mp.t = t[i];
    mp.s = s[i];
    // First-order bound on E[KR_1(mu_hat, mu)], constant and rate from one branch.
    sum += optimize_constant(Model::poisson, measures[i], 1.0, C, mp, metric).bound_kr_p;
  }
  return 2 * p * std::pow(std::min(diam, C), p - 1) / static_cast<double>(J) * sum;
}

}  // namespace urot
