// svg_plot.cpp
#include "jamnet/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace jamnet::svg_plot {

namespace {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("plot: missing column '" + name + "'");
  }
};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      csv.header = split_fields(line);
      first = false;
    } else {
      csv.rows.push_back(split_fields(line));
    }
  }
  if (first) throw std::invalid_argument("plot: empty file, no header");
  return csv;
}

double parse_num(const std::string& s) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("plot: non-numeric field '" + s + "'");
  }
}

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> pts;  // sorted by x
};

// Group rows by series key and x, average y over the group.
std::vector<Series> build_series(const Csv& csv, const PlotSpec& spec) {
  std::vector<Series> series;
  if (spec.kind == PlotKind::fictitious) {
    const int c_round = csv.column("round");
    const int c_pay = csv.column("leader_payoff");
    Series s;
    s.label = "payoff";
    for (const auto& row : csv.rows) {
      const double y = parse_num(row[static_cast<size_t>(c_pay)]);
      if (std::isnan(y)) continue;
      s.pts.push_back({parse_num(row[static_cast<size_t>(c_round)]), y});
    }
    std::sort(s.pts.begin(), s.pts.end());
    if (!s.pts.empty()) series.push_back(std::move(s));
  } else {
    const char* key_col = spec.kind == PlotKind::gateways ? "M" : "N";
    const int c_key = csv.column(key_col);
    const int c_lam = csv.column("lambda");
    const int c_pay = csv.column("leader_payoff");
    std::map<long, std::map<double, std::pair<double, int>>> groups;  // key -> x -> (sum, count)
    for (const auto& row : csv.rows) {
      const double y = parse_num(row[static_cast<size_t>(c_pay)]);
      if (std::isnan(y)) continue;
      const long key = std::lround(parse_num(row[static_cast<size_t>(c_key)]));
      const double x = 1.0 - parse_num(row[static_cast<size_t>(c_lam)]);
      auto& cell = groups[key][x];
      cell.first += y;
      cell.second += 1;
    }
    for (const auto& [key, cells] : groups) {
      Series s;
      s.label = std::string(key_col) + "=" + std::to_string(key);
      for (const auto& [x, cell] : cells) s.pts.push_back({x, cell.first / cell.second});
      series.push_back(std::move(s));
    }
  }
  if (series.empty()) throw std::invalid_argument("plot: no plottable data rows");
  return series;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string default_title(PlotKind k) {
  switch (k) {
    case PlotKind::sweep: return "mean payoff vs jammer aggressiveness";
    case PlotKind::scaling: return "sensor scaling: mean payoff vs jammer aggressiveness";
    case PlotKind::gateways: return "gateway layouts: mean payoff vs jammer aggressiveness";
    case PlotKind::fictitious: return "alternating best-response payoff per round";
  }
  return "";
}

}  // namespace

PlotKind kind_from_string(const std::string& name) {
  if (name == "sweep") return PlotKind::sweep;
  if (name == "scaling") return PlotKind::scaling;
  if (name == "gateways") return PlotKind::gateways;
  if (name == "fictitious") return PlotKind::fictitious;
  throw std::invalid_argument("plot: unknown kind '" + name + "'");
}

std::string render_plot(const std::string& csv_text, const PlotSpec& spec) {
  const Csv csv = parse_csv(csv_text);
  const std::vector<Series> series = build_series(csv, spec);

  double xmin = series[0].pts[0].first, xmax = xmin;
  double ymax = 0.0;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax <= 0.0) ymax = 1.0;
  const double ymin = 0.0;
  ymax *= 1.05;

  const double ml = 62.0, mr = 150.0, mt = 42.0, mb = 52.0;
  const double W = spec.width, H = spec.height;
  const double pw = W - ml - mr, ph = H - mt - mb;
  auto px = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
  auto py = [&](double y) { return mt + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  const std::string title = spec.title.empty() ? default_title(spec.kind) : spec.title;
  svg += "<text x=\"" + fmt2(W / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         title + "</text>\n";

  // gridlines + ticks
  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0;
    const double fy = ymin + (ymax - ymin) * i / 5.0;
    svg += "<line x1=\"" + fmt2(px(fx)) + "\" y1=\"" + fmt2(mt) + "\" x2=\"" + fmt2(px(fx)) +
           "\" y2=\"" + fmt2(mt + ph) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + fmt2(ml) + "\" y1=\"" + fmt2(py(fy)) + "\" x2=\"" + fmt2(ml + pw) +
           "\" y2=\"" + fmt2(py(fy)) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt2(px(fx)) + "\" y=\"" + fmt2(mt + ph + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           fmt_tick(fx) + "</text>\n";
    svg += "<text x=\"" + fmt2(ml - 8) + "\" y=\"" + fmt2(py(fy) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt_tick(fy) +
           "</text>\n";
  }
  // axes
  svg += "<line x1=\"" + fmt2(ml) + "\" y1=\"" + fmt2(mt + ph) + "\" x2=\"" + fmt2(ml + pw) +
         "\" y2=\"" + fmt2(mt + ph) + "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
  svg += "<line x1=\"" + fmt2(ml) + "\" y1=\"" + fmt2(mt) + "\" x2=\"" + fmt2(ml) + "\" y2=\"" +
         fmt2(mt + ph) + "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
  const char* x_label = spec.kind == PlotKind::fictitious ? "round" : "1 - lambda";
  const char* y_label = spec.kind == PlotKind::fictitious ? "payoff" : "mean payoff";
  svg += "<text x=\"" + fmt2(ml + pw / 2) + "\" y=\"" + fmt2(H - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + x_label +
         "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt2(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
         fmt2(mt + ph / 2) + ")\">" + y_label + "</text>\n";

  // series + legend
  for (size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    std::string pts;
    for (const auto& [x, y] : series[si].pts) {
      pts += fmt2(px(x));
      pts += ',';
      pts += fmt2(py(y));
      pts += ' ';
    }
    if (!pts.empty()) pts.pop_back();
    svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    for (const auto& [x, y] : series[si].pts) {
      svg += "<circle cx=\"" + fmt2(px(x)) + "\" cy=\"" + fmt2(py(y)) + "\" r=\"2.5\" fill=\"" +
             color + "\"/>\n";
    }
    const double ly = mt + 14 + 20.0 * static_cast<double>(si);
    svg += "<line x1=\"" + fmt2(ml + pw + 14) + "\" y1=\"" + fmt2(ly) + "\" x2=\"" +
           fmt2(ml + pw + 38) + "\" y2=\"" + fmt2(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt2(ml + pw + 44) + "\" y=\"" + fmt2(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + series[si].label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(const std::string& csv_path, const PlotSpec& spec, const std::string& out_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw std::runtime_error("plot: cannot open '" + csv_path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string svg = render_plot(buf.str(), spec);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("plot: cannot write '" + out_path + "'");
  out << svg;
}

}  // namespace jamnet::svg_plot
