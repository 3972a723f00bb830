#include "urot/experiment.hpp"

#include "urot/barycenter.hpp"
#include "urot/bounds.hpp"
#include "urot/io.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace urot {

namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct GridPoint {
  std::vector<double> values;  // matches the table's param_names
  double C = 1;
  SamplerConfig sampler;
};

// Sampler seeds depend on the sampler grid index only, so every C value sees
// the same draws.
std::uint64_t grid_seed(std::uint64_t seed, std::size_t sampler_index) {
  return seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(sampler_index);
}

std::vector<GridPoint> expand(const ExperimentConfig& cfg, SamplerKind kind,
                              std::vector<std::string>& names) {
  std::vector<std::pair<std::vector<double>, SamplerConfig>> samplers;
  SamplerConfig base;
  base.kind = kind;
  base.general_masses = cfg.general_masses;
  switch (kind) {
    case SamplerKind::poisson:
      names = {"C", "t", "s"};
      for (const double t : cfg.t)
        for (const double s : cfg.s) {
          SamplerConfig sc = base;
          sc.t = t;
          sc.s = s;
          samplers.push_back({{t, s}, sc});
        }
      break;
    case SamplerKind::multinomial:
    case SamplerKind::subsample:
      names = {"C", "N"};
      for (const long N : cfg.N) {
        SamplerConfig sc = base;
        sc.N = N;
        samplers.push_back({{static_cast<double>(N)}, sc});
      }
      break;
    case SamplerKind::bernoulli:
      if (cfg.s0.empty()) {
        names = {"C", "s"};
        for (const double s : cfg.s) {
          SamplerConfig sc = base;
          sc.s = s;
          samplers.push_back({{s}, sc});
        }
      } else {
        names = {"C", "s0"};
        for (const double s0 : cfg.s0) {
          SamplerConfig sc = base;
          sc.s0 = s0;
          samplers.push_back({{s0}, sc});
        }
      }
      break;
  }
  std::vector<GridPoint> grid;
  for (const double C : cfg.C)
    for (std::size_t k = 0; k < samplers.size(); ++k) {
      GridPoint g;
      g.C = C;
      g.values = {C};
      g.values.insert(g.values.end(), samplers[k].first.begin(), samplers[k].first.end());
      g.sampler = samplers[k].second;
      g.sampler.seed = grid_seed(cfg.seed, k);
      grid.push_back(std::move(g));
    }
  return grid;
}

std::string describe(const std::vector<std::string>& names, const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < names.size(); ++k)
    out += (k ? ", " : "") + names[k] + "=" + format_double(values[k]);
  return out;
}

long replications(const ExperimentConfig& cfg) {
  if (cfg.R > 0) return cfg.R;
  return cfg.study == Study::frechet_error ? 100 : 1000;
}

unsigned workers(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void check_sampler(const ExperimentConfig& cfg, const std::vector<Measure>& pop, SamplerKind kind) {
  if (kind == SamplerKind::bernoulli && !cfg.general_masses)
    for (const auto& mu : pop)
      for (Index i = 0; i < mu.size(); ++i)
        if (mu.mass(i) != 1)
          throw ConfigError("bernoulli model needs unit masses; set sampler.general_masses");
  if (kind == SamplerKind::subsample)
    for (const long N : cfg.N)
      for (const auto& mu : pop)
        if (N > mu.size())
          throw ConfigError("subsample N = " + std::to_string(N) + " exceeds a support size of " +
                            std::to_string(mu.size()));
}

ResultRow make_row(const GridPoint& g, std::string estimator, const std::vector<double>& x,
                   std::string flag = {}) {
  ResultRow r;
  r.params = g.values;
  r.estimator = std::move(estimator);
  std::tie(r.mean, r.stderr_) = mean_stderr(x);
  r.R = static_cast<long>(x.size());
  r.flag = std::move(flag);
  return r;
}

// Relative form of nonnegative errors; 0/0 := 0, x/0 reported absolute.
std::string relativise(std::vector<double>& err, double denom) {
  if (denom > 0) {
    for (auto& e : err) e /= denom;
    return {};
  }
  for (const double e : err)
    if (e != 0) return "absolute: population value is 0";
  return {};
}

Model to_model(SamplerKind k) {
  switch (k) {
    case SamplerKind::poisson: return Model::poisson;
    case SamplerKind::multinomial: return Model::multinomial;
    case SamplerKind::bernoulli: return Model::bernoulli;
    case SamplerKind::subsample: break;
  }
  throw ConfigError("bound-vs-empirical has no bound for the subsample model");
}

template <class T>
std::vector<T> list(const json& j, const char* key) {
  if (j.is_array()) return j.get<std::vector<T>>();
  if (j.is_number()) return {j.get<T>()};
  throw ConfigError(std::string("'") + key + "' must be a number or an array of numbers");
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
  }
}

}  // namespace

Study parse_study(const std::string& name) {
  if (name == "kr-error") return Study::kr_error;
  if (name == "frechet-error") return Study::frechet_error;
  if (name == "runtime-tradeoff") return Study::runtime_tradeoff;
  if (name == "bound-vs-empirical") return Study::bound_vs_empirical;
  throw ConfigError("unknown study '" + name + "'");
}

std::string to_string(Study s) {
  switch (s) {
    case Study::kr_error: return "kr-error";
    case Study::frechet_error: return "frechet-error";
    case Study::runtime_tradeoff: return "runtime-tradeoff";
    case Study::bound_vs_empirical: return "bound-vs-empirical";
  }
  return "?";
}

std::pair<double, double> mean_stderr(const std::vector<double>& x) {
  if (x.empty()) return {kNaN, kNaN};
  double sum = 0;
  for (const double v : x) sum += v;
  const double n = static_cast<double>(x.size()), mean = sum / n;
  if (x.size() == 1) return {mean, 0};
  double ss = 0;
  for (const double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

void parallel_for(long n, unsigned threads, const std::function<void(long)>& body) {
  const unsigned k = static_cast<unsigned>(std::min<long>(std::max(1u, threads), std::max(n, 1L)));
  if (k <= 1) {
    for (long r = 0; r < n; ++r) body(r);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < k; ++w)
    pool.emplace_back([&] {
      for (long r = next++; r < n; r = next++) {
        try {
          body(r);
        } catch (...) {
          std::lock_guard lock(guard);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, {"study", "p", "C", "R", "seed", "threads", "centroid_cap", "measures",
                     "dataset", "sampler", "output"},
                 "config");
  ExperimentConfig cfg;
  try {
    if (!j.contains("study")) throw ConfigError("config: 'study' is required");
    cfg.study = parse_study(j.at("study").get<std::string>());
    if (j.contains("p")) cfg.p = j.at("p").get<double>();
    if (j.contains("C")) cfg.C = list<double>(j.at("C"), "C");
    if (j.contains("R")) cfg.R = j.at("R").get<long>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();
    if (j.contains("centroid_cap")) cfg.centroid_cap = j.at("centroid_cap").get<std::size_t>();
    if (j.contains("measures")) cfg.measure_files = j.at("measures").get<std::vector<std::string>>();
    if (j.contains("dataset")) {
      const json& d = j.at("dataset");
      reject_unknown(d, {"class", "J", "M", "lambda", "anchors", "seed"}, "dataset");
      if (!d.contains("class")) throw ConfigError("dataset: 'class' is required");
      DatasetSpec spec = default_params(parse_dataset_class(d.at("class").get<std::string>()));
      if (d.contains("J")) spec.J = d.at("J").get<int>();
      if (d.contains("M")) spec.M = d.at("M").get<int>();
      if (d.contains("lambda")) spec.lambda = d.at("lambda").get<double>();
      if (d.contains("seed")) spec.seed = d.at("seed").get<std::uint64_t>();
      if (d.contains("anchors"))
        for (const auto& a : d.at("anchors")) {
          const auto xy = a.get<std::vector<double>>();
          if (xy.size() != 2) throw ConfigError("dataset: anchors must be [x, y] pairs");
          spec.anchors.emplace_back(xy[0], xy[1]);
        }
      cfg.dataset = spec;
    }
    if (j.contains("sampler")) {
      const json& s = j.at("sampler");
      reject_unknown(s, {"model", "t", "s", "N", "s0", "general_masses"}, "sampler");
      if (s.contains("model")) cfg.model = parse_sampler(s.at("model").get<std::string>());
      if (s.contains("t")) cfg.t = list<double>(s.at("t"), "t");
      if (s.contains("s")) cfg.s = list<double>(s.at("s"), "s");
      if (s.contains("N")) cfg.N = list<long>(s.at("N"), "N");
      if (s.contains("s0")) cfg.s0 = list<double>(s.at("s0"), "s0");
      if (s.contains("general_masses")) cfg.general_masses = s.at("general_masses").get<bool>();
    }
    if (j.contains("output")) {
      const json& o = j.at("output");
      reject_unknown(o, {"csv", "svg", "x", "loglog", "timing"}, "output");
      if (o.contains("csv")) cfg.csv = o.at("csv").get<std::string>();
      if (o.contains("svg")) cfg.svg = o.at("svg").get<std::string>();
      if (o.contains("x")) cfg.x_axis = o.at("x").get<std::string>();
      if (o.contains("loglog")) cfg.loglog = o.at("loglog").get<bool>();
      if (o.contains("timing")) cfg.timing = o.at("timing").get<bool>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  if (cfg.R < 0) throw ConfigError("config: R must be >= 1");
  if (!(cfg.p >= 1) || !std::isfinite(cfg.p)) throw ConfigError("config: p must be >= 1");
  if (cfg.C.empty()) throw ConfigError("config: C grid is empty");
  for (const double C : cfg.C)
    if (!(C > 0) || !std::isfinite(C)) throw ConfigError("config: C values must be positive");
  if (cfg.t.empty() || cfg.s.empty() || cfg.N.empty())
    throw ConfigError("config: sampler grids must be nonempty");
  for (const double t : cfg.t)
    if (!(t > 0) || !std::isfinite(t)) throw ConfigError("config: t must be positive");
  for (const double s : cfg.s)
    if (!(s > 0 && s <= 1)) throw ConfigError("config: s must lie in (0, 1]");
  for (const double s0 : cfg.s0)
    if (!(s0 > 0) || !std::isfinite(s0)) throw ConfigError("config: s0 must be positive");
  for (const long N : cfg.N)
    if (N < 1) throw ConfigError("config: N must be >= 1");
  if (cfg.measure_files.empty() && !cfg.dataset)
    throw ConfigError("config: give 'measures' or 'dataset'");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse_config(ss.str());
  // Relative input and output paths resolve against the config's directory.
  const auto dir = std::filesystem::path(path).parent_path();
  auto resolve = [&](std::string& f) {
    if (!f.empty() && std::filesystem::path(f).is_relative()) f = (dir / f).string();
  };
  for (auto& f : cfg.measure_files) resolve(f);
  resolve(cfg.csv);
  resolve(cfg.svg);
  return cfg;
}

std::vector<Measure> population(const ExperimentConfig& cfg) {
  if (!cfg.measures.empty()) return cfg.measures;
  if (!cfg.measure_files.empty()) {
    std::vector<Measure> out;
    for (const auto& f : cfg.measure_files) {
      const auto ext = std::filesystem::path(f).extension().string();
      out.push_back(ext == ".pgm" ? image_to_measure(load_image(f)) : load_measure(f));
    }
    return out;
  }
  if (cfg.dataset) {
    try {
      return generate(*cfg.dataset);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("config names no population measures");
}

ResultTable run_kr_error(const ExperimentConfig& cfg) {
  const auto pop = population(cfg);
  if (pop.size() < 2) throw ConfigError("kr-error needs two population measures");
  check_sampler(cfg, {pop[0], pop[1]}, cfg.model);
  const long R = replications(cfg);
  ResultTable table;
  for (const auto& g : expand(cfg, cfg.model, table.param_names)) {
    try {
      const double kr = kr_distance(pop[0], pop[1], cfg.p, g.C).value;
      std::vector<double> err(R);
      parallel_for(R, workers(cfg), [&](long r) {
        const auto mu = draw(pop[0], g.sampler, 2 * static_cast<std::uint64_t>(r));
        const auto nu = draw(pop[1], g.sampler, 2 * static_cast<std::uint64_t>(r) + 1);
        err[r] = std::abs(kr_distance(mu, nu, cfg.p, g.C).value - kr);
      });
      const std::string flag = relativise(err, kr);
      table.rows.push_back(make_row(g, to_string(cfg.model), err, flag));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw Error(describe(table.param_names, g.values) + ": " + e.what());
    }
  }
  return table;
}

ResultTable run_frechet_error(const ExperimentConfig& cfg) {
  const auto pop = population(cfg);
  if (pop.empty()) throw ConfigError("frechet-error needs at least one measure");
  check_sampler(cfg, pop, cfg.model);
  const long R = replications(cfg);
  const auto J = static_cast<std::uint64_t>(pop.size());
  const CentroidOptions copts{cfg.centroid_cap, true};
  ResultTable table;
  for (const auto& g : expand(cfg, cfg.model, table.param_names)) {
    try {
      const double F = solve_barycenter(pop, cfg.p, g.C, copts).frechet;
      std::vector<double> err(R);
      parallel_for(R, workers(cfg), [&](long r) {
        std::vector<Measure> sample;
        for (std::uint64_t i = 0; i < J; ++i)
          sample.push_back(draw(pop[i], g.sampler, static_cast<std::uint64_t>(r) * J + i));
        const auto bary = solve_barycenter(sample, cfg.p, g.C, copts).barycenter;
        // F(mu*) is the minimum, so the difference is nonnegative up to rounding.
        err[r] = std::max(0.0, frechet_value(bary, pop, cfg.p, g.C) - F);
      });
      const std::string flag = relativise(err, F);
      table.rows.push_back(make_row(g, "frechet", err, flag));
    } catch (const CapExceeded&) {
      ResultRow row = make_row(g, "frechet", {}, "cap-exceeded");
      row.R = 0;
      table.rows.push_back(std::move(row));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw Error(describe(table.param_names, g.values) + ": " + e.what());
    }
  }
  return table;
}

ResultTable run_runtime_tradeoff(const ExperimentConfig& cfg) {
  const auto pop = population(cfg);
  if (pop.size() < 2) throw ConfigError("runtime-tradeoff needs two population measures");
  const long R = replications(cfg);
  const Index smallest = std::min(pop[0].size(), pop[1].size());
  ResultTable table;
  if (cfg.timing) table.extra_names = {"seconds"};
  for (const auto& g : expand(cfg, SamplerKind::multinomial, table.param_names)) {
    try {
      const double kr = kr_distance(pop[0], pop[1], cfg.p, g.C).value;
      for (const SamplerKind kind : {SamplerKind::multinomial, SamplerKind::subsample}) {
        const std::string name = kind == SamplerKind::multinomial ? "resample" : "subsample";
        if (kind == SamplerKind::subsample && g.sampler.N > smallest) {
          ResultRow row = make_row(g, name, {}, "skipped: N exceeds the support size");
          row.R = 0;
          if (cfg.timing) row.extras = {kNaN};
          table.rows.push_back(std::move(row));
          continue;
        }
        SamplerConfig sc = g.sampler;
        sc.kind = kind;
        std::vector<double> err(R), secs(R);
        parallel_for(R, workers(cfg), [&](long r) {
          const auto mu = draw(pop[0], sc, 2 * static_cast<std::uint64_t>(r));
          const auto nu = draw(pop[1], sc, 2 * static_cast<std::uint64_t>(r) + 1);
          const auto t0 = std::chrono::steady_clock::now();
          const double v = kr_distance(mu, nu, cfg.p, g.C).value;
          secs[r] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          err[r] = std::abs(v - kr);
        });
        const std::string flag = relativise(err, kr);
        ResultRow row = make_row(g, name, err, flag);
        if (cfg.timing) row.extras = {mean_stderr(secs).first};
        table.rows.push_back(std::move(row));
      }
    } catch (const Error& e) {
      throw Error(describe(table.param_names, g.values) + ": " + e.what());
    }
  }
  return table;
}

ResultTable run_bound_vs_empirical(const ExperimentConfig& cfg) {
  const auto pop = population(cfg);
  if (pop.empty()) throw ConfigError("bound-vs-empirical needs a population measure");
  const Measure& mu = pop.front();
  const Model model = to_model(cfg.model);
  check_sampler(cfg, {mu}, cfg.model);
  const long R = replications(cfg);
  ResultTable table;
  for (const auto& g : expand(cfg, cfg.model, table.param_names)) {
    try {
      ModelParams mp;
      mp.t = g.sampler.t;
      mp.s = g.sampler.s;
      mp.N = g.sampler.N;
      mp.s_x = g.sampler.s0 > 0 ? success_profile(mu.points(), g.sampler.s0)
                                : Eigen::VectorXd::Constant(mu.size(), g.sampler.s);
      const BoundReport b = optimize_constant(model, mu, cfg.p, g.C, mp);
      std::vector<double> kr(R), kr_p(R);
      parallel_for(R, workers(cfg), [&](long r) {
        const auto hat = draw(mu, g.sampler, static_cast<std::uint64_t>(r));
        const auto res = kr_distance(hat, mu, cfg.p, g.C);
        kr[r] = res.value;
        kr_p[r] = res.value_p;
      });
      const std::string info = "branch=" + to_string(b.branch) + " q=" + format_double(b.q) +
                               " L=" + std::to_string(b.L);
      for (const bool power : {false, true}) {
        const double bound = power ? b.bound_kr_p : b.bound_kr;
        ResultRow emp = make_row(g, power ? "empirical_kr_p" : "empirical_kr", power ? kr_p : kr);
        if (emp.mean > bound + 2 * emp.stderr_) emp.flag = "violated";
        ResultRow bnd;
        bnd.params = g.values;
        bnd.estimator = power ? "bound_kr_p" : "bound_kr";
        bnd.mean = bound;
        bnd.R = R;
        bnd.flag = info;
        table.rows.push_back(std::move(emp));
        table.rows.push_back(std::move(bnd));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw Error(describe(table.param_names, g.values) + ": " + e.what());
    }
  }
  return table;
}

ResultTable run_study(const ExperimentConfig& cfg) {
  switch (cfg.study) {
    case Study::kr_error: return run_kr_error(cfg);
    case Study::frechet_error: return run_frechet_error(cfg);
    case Study::runtime_tradeoff: return run_runtime_tradeoff(cfg);
    case Study::bound_vs_empirical: return run_bound_vs_empirical(cfg);
  }
  throw ConfigError("unknown study");
}

}  // namespace urot
