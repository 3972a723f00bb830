#pragma once

#include "urot/measure.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace urot {

enum class DatasetClass { PI, PIG, NI, NIG, NE, NEC, SPI, SPIC };

DatasetClass parse_dataset_class(const std::string& name);
std::string to_string(DatasetClass c);

struct DatasetSpec {
  DatasetClass cls = DatasetClass::PI;
  int J = 2;
  int M = 100;
  double lambda = 5;                 // PI, PIG
  std::vector<Eigen::Vector2d> anchors;  // NI, NIG; drawn uniformly when empty
  std::uint64_t seed = 0;
};

/// Default size per class; lambda = 5, J = 2.
DatasetSpec default_params(DatasetClass cls);

/// J measures in [0,1]^2. Measure i draws from stream i of the seed.
std::vector<Measure> generate(const DatasetSpec& spec);

/// n points of [a, b] with both endpoints included.
std::vector<double> linspace(double a, double b, int n);

}  // namespace urot
