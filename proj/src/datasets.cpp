#include "urot/datasets.hpp"

#include "urot/rng.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

namespace urot {

namespace {

using Points = std::vector<Eigen::Vector2d>;

Measure to_measure(const Points& pts, const std::vector<double>& w) {
  Eigen::MatrixXd P(2, static_cast<Index>(pts.size()));
  Eigen::VectorXd m(static_cast<Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    P.col(static_cast<Index>(k)) = pts[k];
    m(static_cast<Index>(k)) = w[k];
  }
  if (pts.empty()) return Measure(2);
  return {P, m};
}

Points grid(int M) {
  const auto axis = linspace(0, 1, M);
  Points pts;
  for (int r = 0; r < M; ++r)
    for (int c = 0; c < M; ++c) pts.emplace_back(axis[c], axis[r]);
  return pts;
}

Points uniform_points(int K, Rng& rng) {
  Points pts(K);
  for (auto& x : pts) {
    x(0) = rng.uniform();
    x(1) = rng.uniform();
  }
  return pts;
}

// One ellipse family: rings j = 0..G-1 of radius 3^-j, point M j + k.
void rings(int G, int M, Rng& rng, const std::function<Eigen::Vector2d(double, double)>& place,
           Points& out) {
  const auto t = linspace(0, 2 * std::numbers::pi, M);
  std::vector<double> U(static_cast<std::size_t>(G) * M), V(U.size());
  for (auto& u : U) u = rng.uniform(0.2, 1);
  for (auto& v : V) v = rng.uniform(0.2, 1);
  for (int j = 0; j < G; ++j) {
    const double r = std::pow(3.0, -j);
    for (int k = 0; k < M; ++k) {
      const std::size_t idx = static_cast<std::size_t>(M) * j + k;
      out.push_back(place(r * U[idx] * std::sin(t[k]), r * V[idx] * std::cos(t[k])));
    }
  }
}

// Spiral arm in [0,1]^2; (a, b) are redrawn until every point lies inside.
Points spiral(int M, Rng& rng) {
  while (true) {
    const double a = rng.uniform(2, 4), b = rng.uniform(3, 6);
    const int K = static_cast<int>(std::ceil(b * M));
    const auto t = linspace(0, b * std::numbers::pi, K);
    Points pts;
    bool inside = true;
    for (const double tk : t) {
      const Eigen::Vector2d x((a * tk * std::sin(tk) + 64) / 140, (a * tk * std::cos(tk) + 70) / 130);
      inside = inside && x.minCoeff() >= 0 && x.maxCoeff() <= 1;
      pts.push_back(x);
    }
    if (inside) return pts;
  }
}

Eigen::Vector2d anchor(const DatasetSpec& spec, int i, Rng& rng) {
  if (spec.anchors.empty()) {
    const double x = rng.uniform(), y = rng.uniform();
    return {x, y};
  }
  if (static_cast<int>(spec.anchors.size()) != spec.J)
    throw Error("dataset: need exactly J anchor points");
  return spec.anchors[i];
}

}  // namespace

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = (a + b) / 2;
    return v;
  }
  for (int k = 0; k < n; ++k) v[k] = a + (b - a) * k / (n - 1);
  return v;
}

DatasetClass parse_dataset_class(const std::string& name) {
  static const std::array<std::pair<const char*, DatasetClass>, 8> table{{
      {"PI", DatasetClass::PI}, {"PIG", DatasetClass::PIG}, {"NI", DatasetClass::NI},
      {"NIG", DatasetClass::NIG}, {"NE", DatasetClass::NE}, {"NEC", DatasetClass::NEC},
      {"SPI", DatasetClass::SPI}, {"SPIC", DatasetClass::SPIC}}};
  for (const auto& [n, c] : table)
    if (name == n) return c;
  throw Error("unknown dataset class '" + name + "'");
}

std::string to_string(DatasetClass c) {
  switch (c) {
    case DatasetClass::PI: return "PI";
    case DatasetClass::PIG: return "PIG";
    case DatasetClass::NI: return "NI";
    case DatasetClass::NIG: return "NIG";
    case DatasetClass::NE: return "NE";
    case DatasetClass::NEC: return "NEC";
    case DatasetClass::SPI: return "SPI";
    case DatasetClass::SPIC: return "SPIC";
  }
  return "?";
}

DatasetSpec default_params(DatasetClass cls) {
  DatasetSpec s;
  s.cls = cls;
  switch (cls) {
    case DatasetClass::NE: s.M = 100; break;
    case DatasetClass::NEC: s.M = 75; break;
    case DatasetClass::PI: s.M = 450; break;
    case DatasetClass::PIG: s.M = 22; break;
    case DatasetClass::NI: s.M = 300; break;
    case DatasetClass::NIG: s.M = 17; break;
    case DatasetClass::SPI: s.M = 65; break;
    case DatasetClass::SPIC: s.M = 12; break;
  }
  return s;
}

std::vector<Measure> generate(const DatasetSpec& spec) {
  if (spec.J < 1) throw Error("dataset: J must be >= 1");
  if (spec.M < 1) throw Error("dataset: M must be >= 1");
  if (!(spec.lambda >= 0) || !std::isfinite(spec.lambda)) throw Error("dataset: lambda must be >= 0");
  std::vector<Measure> out;
  for (int i = 0; i < spec.J; ++i) {
    Rng rng(spec.seed, static_cast<std::uint64_t>(i));
    Points pts;
    std::vector<double> w;
    switch (spec.cls) {
      case DatasetClass::PI:
      case DatasetClass::PIG: {
        pts = spec.cls == DatasetClass::PI ? uniform_points(spec.M, rng) : grid(spec.M);
        for (std::size_t k = 0; k < pts.size(); ++k)
          w.push_back(static_cast<double>(rng.poisson(spec.lambda)));
        break;
      }
      case DatasetClass::NI:
      case DatasetClass::NIG: {
        const Eigen::Vector2d l0 = anchor(spec, i, rng);
        pts = spec.cls == DatasetClass::NI ? uniform_points(spec.M, rng) : grid(spec.M);
        for (const auto& x : pts) w.push_back((x - l0).norm());
        break;
      }
      case DatasetClass::NE: {
        const int G = 1 + static_cast<int>(rng.below(5));
        rings(G, spec.M, rng,
              [](double u, double v) { return Eigen::Vector2d(0.5 * (1 + u), 0.5 * (1 + v)); }, pts);
        break;
      }
      case DatasetClass::NEC: {
        static constexpr std::array<double, 5> alpha{2, 12, 12, 22, 12}, beta{12, 2, 12, 12, 22};
        std::array<int, 5> G{};
        for (int c = 0; c < 5; ++c) G[c] = static_cast<int>(rng.poisson(c == 2 ? 2.0 : 1.0));
        for (int c = 0; c < 5; ++c)
          rings(G[c], spec.M, rng,
                [c](double u, double v) {
                  return Eigen::Vector2d((u + alpha[c]) / 24, (v + beta[c]) / 24);
                },
                pts);
        break;
      }
      case DatasetClass::SPI: pts = spiral(spec.M, rng); break;
      case DatasetClass::SPIC: {
        static constexpr std::array<double, 5> alpha{0, 3, 3, 6, 3}, beta{3, 0, 3, 3, 6};
        for (int c = 0; c < 5; ++c)
          for (const auto& x : spiral(spec.M, rng))
            pts.emplace_back((x(0) + alpha[c]) / 7, (x(1) + beta[c]) / 7);
        break;
      }
    }
    if (w.empty()) w.assign(pts.size(), 1.0);
    out.push_back(to_measure(pts, w));
  }
  return out;
}

}  // namespace urot
