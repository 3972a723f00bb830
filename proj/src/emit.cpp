#include "urot/emit.hpp"

#include "urot/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace urot {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse(const std::string& s, const std::string& where) {
  double v = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw Error(where + ": bad number '" + s + "'");
  return v;
}

std::string clean_flag(std::string f) {
  std::replace(f.begin(), f.end(), ',', ';');
  std::replace(f.begin(), f.end(), '\n', ' ');
  return f;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_table_csv(std::ostream& out, const ResultTable& table) {
  for (const auto& n : table.param_names) out << n << ',';
  out << "estimator,mean,stderr,R,flag";
  for (const auto& n : table.extra_names) out << ',' << n;
  out << '\n';
  for (const auto& r : table.rows) {
    if (r.params.size() != table.param_names.size() || r.extras.size() != table.extra_names.size())
      throw Error("result table: row width does not match the header");
    for (const double v : r.params) out << format_double(v) << ',';
    out << r.estimator << ',' << format_double(r.mean) << ',' << format_double(r.stderr_) << ','
        << r.R << ',' << clean_flag(r.flag);
    for (const double v : r.extras) out << ',' << format_double(v);
    out << '\n';
  }
}

ResultTable read_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("result csv: missing header");
  const auto head = split(line);
  const auto est = std::find(head.begin(), head.end(), "estimator");
  if (est == head.end() || head.end() - est < 5 || *(est + 1) != "mean" || *(est + 2) != "stderr" ||
      *(est + 3) != "R" || *(est + 4) != "flag")
    throw Error("result csv: header must contain estimator,mean,stderr,R,flag");
  ResultTable t;
  t.param_names.assign(head.begin(), est);
  t.extra_names.assign(est + 5, head.end());
  const std::size_t np = t.param_names.size(), width = head.size();
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    const std::string where = "result csv line " + std::to_string(lineno);
    if (cells.size() != width) throw Error(where + ": expected " + std::to_string(width) + " fields");
    ResultRow r;
    for (std::size_t k = 0; k < np; ++k) r.params.push_back(parse(cells[k], where));
    r.estimator = cells[np];
    r.mean = parse(cells[np + 1], where);
    r.stderr_ = parse(cells[np + 2], where);
    r.R = static_cast<long>(parse(cells[np + 3], where));
    r.flag = cells[np + 4];
    for (std::size_t k = np + 5; k < width; ++k) r.extras.push_back(parse(cells[k], where));
    t.rows.push_back(std::move(r));
  }
  return t;
}

void write_table_svg(std::ostream& out, const ResultTable& table, const SvgOptions& opts) {
  std::size_t xi = 0;
  if (!opts.x.empty()) {
    const auto it = std::find(table.param_names.begin(), table.param_names.end(), opts.x);
    if (it == table.param_names.end()) throw Error("svg: unknown x column '" + opts.x + "'");
    xi = static_cast<std::size_t>(it - table.param_names.begin());
  }
  const bool has_x = !table.param_names.empty();
  const auto tx = [&](double v) { return opts.loglog ? std::log10(v) : v; };

  // Series key: estimator plus every grid value except x.
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& r = table.rows[k];
    const double x = has_x ? r.params[xi] : static_cast<double>(k);
    if (!std::isfinite(r.mean) || !std::isfinite(x)) continue;
    if (opts.loglog && (x <= 0 || r.mean <= 0)) continue;
    std::string key = r.estimator;
    for (std::size_t c = 0; c < r.params.size(); ++c)
      if (c != xi) key += " " + table.param_names[c] + "=" + format_double(r.params[c]);
    series[key].emplace_back(tx(x), tx(r.mean));
  }

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& [_, pts] : series)
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (series.empty()) x0 = y0 = 0, x1 = y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;

  const double W = opts.width, H = opts.height, ml = 70, mr = 220, mt = 30, mb = 50;
  const auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
  const auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
  const auto label = [&](double v) { return format_double(opts.loglog ? std::pow(10.0, v) : v); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    out << "<text x=\"" << ml << "\" y=\"18\" font-size=\"14\" font-family=\"sans-serif\">"
        << xml_escape(opts.title) << "</text>\n";
  out << "<g stroke=\"black\" fill=\"none\"><line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\""
      << W - mr << "\" y2=\"" << H - mb << "\"/><line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\""
      << ml << "\" y2=\"" << H - mb << "\"/></g>\n";
  out << "<g font-size=\"10\" font-family=\"sans-serif\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4, fy = y0 + (y1 - y0) * k / 4;
    out << "<text x=\"" << px(fx) << "\" y=\"" << H - mb + 14 << "\" text-anchor=\"middle\">"
        << xml_escape(label(fx)) << "</text>\n";
    out << "<text x=\"" << ml - 4 << "\" y=\"" << py(fy) + 3 << "\" text-anchor=\"end\">"
        << xml_escape(label(fy)) << "</text>\n";
  }
  out << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
      << xml_escape(has_x ? table.param_names[xi] : "row") << (opts.loglog ? " (log)" : "")
      << "</text>\n</g>\n";

  int s = 0;
  for (auto& [key, pts] : series) {
    std::sort(pts.begin(), pts.end());
    const char* color = palette[s % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) out << px(x) << ',' << py(y) << ' ';
    out << "\"/>\n";
    for (const auto& [x, y] : pts)
      out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    out << "<text x=\"" << W - mr + 8 << "\" y=\"" << mt + 14 * s + 10
        << "\" font-size=\"10\" font-family=\"sans-serif\" fill=\"" << color << "\">"
        << xml_escape(key) << "</text>\n";
    ++s;
  }
  out << "</svg>\n";
}

void emit(const ResultTable& table, const std::string& csv_path, const std::string& svg_path,
          const SvgOptions& opts) {
  if (table.rows.empty()) throw Error("emit: empty result table");
  {
    std::ofstream out(csv_path);
    if (!out) throw Error("cannot write '" + csv_path + "'");
    write_table_csv(out, table);
    if (!out) throw Error("write failed for '" + csv_path + "'");
  }
  if (svg_path.empty()) return;
  std::ofstream out(svg_path);
  if (!out) throw Error("cannot write '" + svg_path + "'");
  write_table_svg(out, table, opts);
  if (!out) throw Error("write failed for '" + svg_path + "'");
}

}  // namespace urot
