// urot: command line front end. Exit codes: 0 ok, 2 invalid input or
// config, 3 solver failure, 4 centroid cap exceeded.

#include "urot/barycenter.hpp"
#include "urot/bounds.hpp"
#include "urot/datasets.hpp"
#include "urot/experiment.hpp"
#include "urot/io.hpp"
#include "urot/sampling.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>

namespace {

using namespace urot;
using json = nlohmann::json;

Measure load(const std::string& path) {
  try {
    if (std::filesystem::path(path).extension() == ".pgm") return image_to_measure(load_image(path));
    return load_measure(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

// Runs an input-parsing step; its failures are input errors, not solver ones.
template <class F>
auto checked(F f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

// JSON has no infinity; non-finite numbers become strings.
json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

json report_json(const BoundReport& r) {
  return {{"model", to_string(r.model)}, {"p", r.p},
          {"C", r.C},                    {"q", r.q},
          {"L", r.L},                    {"branch", to_string(r.branch)},
          {"level", r.level},            {"constant", number(r.constant)},
          {"rate", number(r.rate)},      {"bound_kr_p", number(r.bound_kr_p)},
          {"bound_kr", number(r.bound_kr)}};
}

struct Sampling {
  std::string model = "poisson";
  double t = 1, s = 1, s0 = -1;
  long N = 1;
  bool general = false;
};

void add_sampling(CLI::App* cmd, Sampling& o) {
  cmd->add_option("--model", o.model, "poisson, multinomial, bernoulli or subsample");
  cmd->add_option("--t", o.t, "Poisson intensity scale");
  cmd->add_option("--s", o.s, "thinning / success probability");
  cmd->add_option("--N", o.N, "sample size");
  cmd->add_option("--s0", o.s0, "Bernoulli profile parameter");
  cmd->add_flag("--general-masses", o.general, "allow non-unit masses in the Bernoulli model");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unbalanced optimal transport: KR distances, bounds, sampling, barycenters"};
  app.require_subcommand(1);

  std::string mu_path, nu_path, plan_path, metric_name = "euclidean", out_path;
  double p = 1, C = 1;

  auto* kr = app.add_subcommand("kr", "KR distance between two measures");
  kr->add_option("--mu", mu_path)->required();
  kr->add_option("--nu", nu_path)->required();
  kr->add_option("--p", p);
  kr->add_option("--C", C)->required();
  kr->add_option("--metric", metric_name, "euclidean or chebyshev");
  kr->add_option("--plan", plan_path, "write the sub-coupling as i,j,mass rows");

  Sampling smp;
  double q = 2;
  int L = -1;
  bool optimize = false;
  auto* bound = app.add_subcommand("bound", "deviation bound as JSON");
  bound->add_option("--mu", mu_path)->required();
  bound->add_option("--p", p);
  bound->add_option("--C", C)->required();
  bound->add_option("--q", q);
  bound->add_option("--L", L);
  bound->add_flag("--optimize", optimize, "search q and L (default when --L is absent)");
  bound->add_option("--metric", metric_name);
  add_sampling(bound, smp);

  std::uint64_t seed = 0, stream = 0;
  auto* sample = app.add_subcommand("sample", "draw one empirical measure");
  sample->add_option("--mu", mu_path)->required();
  sample->add_option("--seed", seed);
  sample->add_option("--stream", stream);
  sample->add_option("--out", out_path)->required();
  add_sampling(sample, smp);

  std::vector<std::string> measure_paths;
  std::string plans_dir;
  std::size_t cap = 50000;
  auto* bary = app.add_subcommand("barycenter", "(p,C)-barycenter of J measures");
  bary->add_option("--measures", measure_paths)->required()->delimiter(',');
  bary->add_option("--p", p);
  bary->add_option("--C", C)->required();
  bary->add_option("--out", out_path)->required();
  bary->add_option("--plans", plans_dir, "directory for the J plans");
  bary->add_option("--cap", cap, "centroid candidate cap");

  std::string cls, out_dir = ".";
  DatasetSpec ds;
  bool has_M = false, has_lambda = false;
  auto* gen = app.add_subcommand("generate", "synthetic measures");
  gen->add_option("--class", cls)->required();
  gen->add_option("--J", ds.J);
  auto* opt_M = gen->add_option("--M", ds.M);
  auto* opt_lambda = gen->add_option("--lambda", ds.lambda);
  gen->add_option("--seed", ds.seed);
  gen->add_option("--out-dir", out_dir);

  std::string config_path, csv_path, svg_path;
  auto* exp = app.add_subcommand("experiment", "Monte Carlo study from a JSON config");
  exp->add_option("--config", config_path)->required();
  exp->add_option("--csv", csv_path, "overrides output.csv");
  exp->add_option("--svg", svg_path, "overrides output.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*kr || *bound || *bary) checked([&] { validate_penalty(p, C); return 0; });
    if (*kr) {
      const auto metric = checked([&] { return GroundMetric::parse(metric_name); });
      const auto res = kr_distance(load(mu_path), load(nu_path), p, C, metric);
      if (!plan_path.empty()) save_plan(res.plan, plan_path);
      std::cout << json{{"kr", res.value}, {"kr_p", res.value_p}, {"iterations", res.iterations}}.dump()
                << '\n';
    } else if (*bound) {
      const Measure mu = load(mu_path);
      const auto metric = checked([&] { return GroundMetric::parse(metric_name); });
      const Model model = checked([&] { return parse_model(smp.model); });
      ModelParams mp;
      mp.t = smp.t;
      mp.s = smp.s;
      mp.N = smp.N;
      mp.s_x = smp.s0 > 0 ? success_profile(mu.points(), smp.s0)
                          : Eigen::VectorXd::Constant(mu.size(), smp.s);
      const BoundReport r = checked([&] {
        return (optimize || L < 0) ? optimize_constant(model, mu, p, C, mp, metric)
                                   : deviation_constant(model, mu, p, C, q, L, mp, metric);
      });
      std::cout << report_json(r).dump(2) << '\n';
    } else if (*sample) {
      SamplerConfig sc;
      sc.kind = checked([&] { return parse_sampler(smp.model); });
      sc.t = smp.t;
      sc.s = smp.s;
      sc.N = smp.N;
      sc.s0 = smp.s0;
      sc.general_masses = smp.general;
      sc.seed = seed;
      const Measure mu = load(mu_path);
      save_measure(checked([&] { return draw(mu, sc, stream); }), out_path);
    } else if (*bary) {
      std::vector<Measure> ms;
      for (const auto& f : measure_paths) ms.push_back(load(f));
      const auto sol = solve_barycenter(ms, p, C, {cap, true});
      save_measure(sol.barycenter, out_path);
      if (!plans_dir.empty()) {
        std::filesystem::create_directories(plans_dir);
        for (std::size_t i = 0; i < sol.plans.size(); ++i)
          save_plan(sol.plans[i], (std::filesystem::path(plans_dir) /
                                   ("plan_" + std::to_string(i) + ".csv")).string());
      }
      std::cout << json{{"frechet", sol.frechet},
                        {"support", sol.barycenter.size()},
                        {"candidates", sol.centroids.size()},
                        {"mass", sol.barycenter.total_mass()}}
                       .dump()
                << '\n';
    } else if (*gen) {
      has_M = opt_M->count() > 0;
      has_lambda = opt_lambda->count() > 0;
      DatasetSpec spec = default_params(checked([&] { return parse_dataset_class(cls); }));
      spec.J = ds.J;
      spec.seed = ds.seed;
      if (has_M) spec.M = ds.M;
      if (has_lambda) spec.lambda = ds.lambda;
      const auto ms = checked([&] { return generate(spec); });
      std::filesystem::create_directories(out_dir);
      for (std::size_t i = 0; i < ms.size(); ++i)
        save_measure(ms[i], (std::filesystem::path(out_dir) /
                             (cls + "_" + std::to_string(i) + ".csv")).string());
    } else if (*exp) {
      ExperimentConfig cfg = load_config(config_path);
      if (!csv_path.empty()) cfg.csv = csv_path;
      if (!svg_path.empty()) cfg.svg = svg_path;
      const ResultTable table = run_study(cfg);
      SvgOptions so;
      so.x = cfg.x_axis;
      so.loglog = cfg.loglog;
      so.title = to_string(cfg.study);
      if (cfg.csv.empty())
        write_table_csv(std::cout, table);
      else
        emit(table, cfg.csv, cfg.svg, so);
      bool all_capped = !table.rows.empty();
      for (const auto& r : table.rows) all_capped = all_capped && r.flag == "cap-exceeded";
      if (all_capped) {
        std::cerr << "urot: centroid cap exceeded at every grid point\n";
        return 4;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "urot: " << e.what() << '\n';
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "urot: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    std::cerr << "urot: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "urot: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
