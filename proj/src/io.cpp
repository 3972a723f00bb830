#include "urot/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace urot {

namespace {

double parse_number(std::string_view field, const std::string& where) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
    field.remove_suffix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
    throw Error(where + ": cannot parse '" + std::string(field) + "' as a number");
  return v;
}

std::vector<double> split_row(const std::string& line, const std::string& where) {
  std::vector<double> out;
  std::string_view rest(line);
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_number(rest.substr(0, comma), where));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

Measure read_measure_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  Index dim = -1, lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const std::string where = "measure csv line " + std::to_string(lineno);
    auto row = split_row(line, where);
    if (row.size() < 2) throw Error(where + ": expected coordinates followed by a mass");
    if (dim < 0) dim = static_cast<Index>(row.size()) - 1;
    if (static_cast<Index>(row.size()) - 1 != dim)
      throw Error(where + ": inconsistent dimension (expected " + std::to_string(dim) + ")");
    if (row.back() < 0) throw Error(where + ": negative mass");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Measure(dim < 0 ? 2 : dim);
  Eigen::MatrixXd pts(dim, static_cast<Index>(rows.size()));
  Eigen::VectorXd mass(static_cast<Index>(rows.size()));
  for (Index k = 0; k < pts.cols(); ++k) {
    for (Index d = 0; d < dim; ++d) pts(d, k) = rows[k][d];
    mass(k) = rows[k][dim];
  }
  return {pts, mass};
}

void write_measure_csv(std::ostream& out, const Measure& mu) {
  for (Index k = 0; k < mu.size(); ++k) {
    for (Index d = 0; d < mu.dim(); ++d) out << format_double(mu.points()(d, k)) << ',';
    out << format_double(mu.mass(k)) << '\n';
  }
}

Measure load_measure(const std::string& path, const std::string& format) {
  if (format != "csv") throw Error("unsupported measure format '" + format + "'");
  auto in = open_in(path);
  return read_measure_csv(in);
}

void save_measure(const Measure& mu, const std::string& path, const std::string& format) {
  if (format != "csv") throw Error("unsupported measure format '" + format + "'");
  auto out = open_out(path);
  write_measure_csv(out, mu);
  if (!out) throw Error("write to '" + path + "' failed");
}

void write_plan_csv(std::ostream& out, const TransportPlan& plan) {
  for (const auto& e : plan.entries)
    out << e.source << ',' << e.sink << ',' << format_double(e.mass) << '\n';
}

TransportPlan read_plan_csv(std::istream& in) {
  TransportPlan plan;
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const std::string where = "plan csv line " + std::to_string(lineno);
    const auto row = split_row(line, where);
    if (row.size() != 3) throw Error(where + ": expected i,j,mass");
    const auto i = static_cast<Index>(row[0]), j = static_cast<Index>(row[1]);
    if (static_cast<double>(i) != row[0] || static_cast<double>(j) != row[1] || i < -1 || j < -1)
      throw Error(where + ": invalid index");
    if (row[2] < 0) throw Error(where + ": negative mass");
    plan.entries.push_back({i, j, row[2]});
    plan.includes_dummy = plan.includes_dummy || i == kDummy || j == kDummy;
    plan.rows = std::max(plan.rows, i + 1);
    plan.cols = std::max(plan.cols, j + 1);
  }
  return plan;
}

void save_plan(const TransportPlan& plan, const std::string& path) {
  auto out = open_out(path);
  write_plan_csv(out, plan);
  if (!out) throw Error("write to '" + path + "' failed");
}

TransportPlan load_plan(const std::string& path) {
  auto in = open_in(path);
  return read_plan_csv(in);
}

namespace {

// Next whitespace-separated token of a PGM header, skipping comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(c);
  }
  if (tok.empty()) throw Error("pgm: truncated header");
  return tok;
}

long pgm_int(std::istream& in) {
  const std::string tok = pgm_token(in);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 0)
    throw Error("pgm: invalid header value '" + tok + "'");
  return v;
}

}  // namespace

Eigen::MatrixXd read_pgm(std::istream& in) {
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") throw Error("unsupported image format '" + magic + "'");
  const long w = pgm_int(in), h = pgm_int(in), maxval = pgm_int(in);
  if (maxval < 1 || maxval > 65535) throw Error("pgm: invalid maxval");
  Eigen::MatrixXd img(h, w);
  if (magic == "P2") {
    for (long r = 0; r < h; ++r)
      for (long c = 0; c < w; ++c) img(r, c) = static_cast<double>(pgm_int(in));
  } else {
    const int bytes = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> buf(static_cast<std::size_t>(w * h * bytes));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) throw Error("pgm: truncated data");
    for (long r = 0; r < h; ++r)
      for (long c = 0; c < w; ++c) {
        const std::size_t k = static_cast<std::size_t>((r * w + c) * bytes);
        img(r, c) = bytes == 1 ? buf[k] : (buf[k] << 8 | buf[k + 1]);
      }
  }
  return img;
}

Eigen::MatrixXd read_intensity_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    rows.push_back(split_row(line, "image csv line " + std::to_string(lineno)));
    if (rows.back().size() != rows.front().size())
      throw Error("image csv line " + std::to_string(lineno) + ": ragged row");
  }
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd img(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (Index r = 0; r < img.rows(); ++r)
    for (Index c = 0; c < img.cols(); ++c) img(r, c) = rows[r][c];
  return img;
}

Eigen::MatrixXd load_image(const std::string& path) {
  auto in = open_in(path);
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "pgm") return read_pgm(in);
  if (ext == "csv") return read_intensity_csv(in);
  throw Error("unsupported image format '" + ext + "' (expected .pgm or .csv)");
}

}  // namespace urot
