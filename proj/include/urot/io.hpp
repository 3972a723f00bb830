#pragma once

#include "urot/kr.hpp"

#include <iosfwd>
#include <string>

namespace urot {

/// Header-less rows `c_1,...,c_D,mass`; D is taken from the first row.
Measure read_measure_csv(std::istream& in);
void write_measure_csv(std::ostream& out, const Measure& mu);

Measure load_measure(const std::string& path, const std::string& format = "csv");
void save_measure(const Measure& mu, const std::string& path, const std::string& format = "csv");

/// Rows `i,j,mass`; -1 marks the virtual point.
void write_plan_csv(std::ostream& out, const TransportPlan& plan);
TransportPlan read_plan_csv(std::istream& in);
void save_plan(const TransportPlan& plan, const std::string& path);
TransportPlan load_plan(const std::string& path);

/// Grayscale intensities, row 0 at the top.
Eigen::MatrixXd read_pgm(std::istream& in);
Eigen::MatrixXd read_intensity_csv(std::istream& in);
/// Dispatches on extension: .pgm or .csv.
Eigen::MatrixXd load_image(const std::string& path);

/// One point per nonzero pixel at its center, (col + 0.5) / cols and
/// (rows - row - 0.5) / rows, with the intensity as mass.
Measure image_to_measure(const Eigen::MatrixXd& intensity);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

}  // namespace urot
