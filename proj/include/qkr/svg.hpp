#pragma once

#include <string>
#include <vector>

namespace qkr::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  std::string dash;  // SVG stroke-dasharray, empty for solid
  double stroke_width = 1.5;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  int width = 760;
  int height = 480;
  std::string comment;  // emitted as an XML comment after the root element
};

/// Self-contained SVG document (no external fonts, images or scripts).
std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series);

std::string xml_escape(const std::string& text);

/// 1-2-5 tick positions covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace qkr::svg
