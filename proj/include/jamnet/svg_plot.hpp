// svg_plot.hpp -- deterministic CSV -> SVG line charts for the experiment outputs.
#pragma once

#include <string>

namespace jamnet::svg_plot {

enum class PlotKind { sweep, scaling, gateways, fictitious };

PlotKind kind_from_string(const std::string& name);

struct PlotSpec {
  PlotKind kind = PlotKind::sweep;
  std::string title;  // empty -> a default per kind
  int width = 760;
  int height = 480;
};

// Renders a line chart from CSV text (comma separated, first line is the
// header, no quoting). sweep/scaling: one series per N, x = 1 - lambda,
// y = mean leader payoff over trials. gateways: one series per M. fictitious:
// payoff per round, single series. Rows with a NaN payoff are skipped.
// Throws std::invalid_argument when a required column is missing or no data
// rows survive. Identical input bytes yield identical output bytes.
std::string render_plot(const std::string& csv_text, const PlotSpec& spec);

// Reads the CSV, renders, then writes the SVG. Nothing is written when
// parsing or rendering fails. Throws std::runtime_error on file i/o errors.
void emit_plot(const std::string& csv_path, const PlotSpec& spec, const std::string& out_path);

}  // namespace jamnet::svg_plot
