#pragma once

#include "urot/measure.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace urot {

struct ResultRow {
  std::vector<double> params;  // one value per grid column
  std::string estimator;
  double mean = 0;
  double stderr_ = 0;          // sample std / sqrt(R)
  long R = 0;
  std::string flag;            // empty when the row is clean
  std::vector<double> extras;  // one value per extra column
};

/// Long format: grid columns, then estimator,mean,stderr,R,flag, then extras.
struct ResultTable {
  std::vector<std::string> param_names;
  std::vector<std::string> extra_names;
  std::vector<ResultRow> rows;
};

void write_table_csv(std::ostream& out, const ResultTable& table);
ResultTable read_table_csv(std::istream& in);

struct SvgOptions {
  std::string x;          // grid column on the horizontal axis; first column when empty
  bool loglog = false;
  std::string title;
  int width = 640;
  int height = 420;
};

/// Line chart of mean against one grid column; one series per estimator and
/// remaining grid values. Non-finite or (on log axes) non-positive points are skipped.
void write_table_svg(std::ostream& out, const ResultTable& table, const SvgOptions& opts = {});

/// CSV to `csv_path`; SVG too when `svg_path` is nonempty.
void emit(const ResultTable& table, const std::string& csv_path, const std::string& svg_path = "",
          const SvgOptions& opts = {});

}  // namespace urot
