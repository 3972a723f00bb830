#pragma once

#include "urot/tree.hpp"

#include <string>
#include <vector>

namespace urot {

enum class Model { poisson, multinomial, bernoulli };
enum class Branch { large_c, intermediate, tv };

Model parse_model(const std::string& name);
std::string to_string(Model m);
std::string to_string(Branch b);

/// Sampling parameters; only the fields of the chosen model are read.
struct ModelParams {
  double t = 1;            // poisson intensity scale
  double s = 1;            // poisson thinning probability
  long N = 1;              // multinomial sample size
  Eigen::VectorXd s_x;     // bernoulli success probability per support point
};

struct BoundReport {
  Model model = Model::poisson;
  double p = 1;
  double C = 1;
  double q = 2;
  int L = 0;
  Branch branch = Branch::tv;
  int level = 0;          // l of the intermediate branch, 0 otherwise
  double constant = 0;    // model constant E(C, q, L)
  double rate = 0;        // phi, psi or N^(-1/2)
  double bound_kr_p = 0;  // bound on E[KR^p]
  double bound_kr = 0;    // bound on E[KR] = bound_kr_p^(1/p)
};

/// Poisson rate factor. TV branch (C <= dmin): 2(1-s)M + s/sqrt(t) sum sqrt(mu);
/// else (M/(st) + (1-s)/s sum mu^2)^(1/2).
double phi(double t, double s, const Measure& mu, double C, double dmin);

/// Bernoulli rate factor for masses mu and success vector s_x (support
/// order). TV branch: 2 sum mu (1 - s_x); else (sum mu^2 (1-s_x)/s_x)^(1/2),
/// +inf when some s_x = 0. With unit masses these are the usual forms.
double psi(const Eigen::VectorXd& s_x, const Measure& mu, double C, double dmin);

/// E|P - lambda| for P ~ Poisson(lambda), evaluated in log space.
double poisson_mad(double lambda);

/// A(l) = diam^p 2^(p-1) (q^(-Lp) sqrt|X| + k^p sum_{j=l..L} q^(p-jp) sqrt|Q_j|),
/// k = q/(q-1) for p > 1 and 1 for p = 1.
double a_term(const CoveringHierarchy& h, double p, int l);

/// Constant, branch and rate for the given hierarchy parameters. X = supp(mu).
BoundReport deviation_constant(Model model, const Measure& mu, double p, double C, double q, int L,
                               const ModelParams& params,
                               const GroundMetric& metric = GroundMetric::euclidean());

/// Grid search over q in {1.5, 2, 3, 4} and L in 0..Lmax minimising the
/// final bound on E[KR^p].
BoundReport optimize_constant(Model model, const Measure& mu, double p, double C,
                              const ModelParams& params,
                              const GroundMetric& metric = GroundMetric::euclidean());

/// Closed-form Poisson constant on [0,1]^D style supports with q = 2 and the
/// sup-norm lift, including the D^(p/2) prefactor.
double explicit_euclidean_constant(int D, double p, double C, double card_x, double diam_inf,
                                   double dmin_inf);

/// Depth used by the explicit constant: floor(log2|X| / D) for D >= 2p.
int explicit_depth(int D, double p, double card_x);

/// Bound on E|F(mu*) - F(mu_hat*)| for independent Poisson estimators with
/// parameters (t_i, s_i).
double frechet_deviation_bound(const std::vector<Measure>& measures, double p, double C,
                               const std::vector<double>& t, const std::vector<double>& s,
                               const GroundMetric& metric = GroundMetric::euclidean());

}  // namespace urot
