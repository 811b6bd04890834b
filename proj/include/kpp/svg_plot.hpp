#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kpp::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool markers = false;
};

/// Horizontal dashed line at a fixed y value.
struct Guide {
  std::string label;
  double y;
  std::string color = "#d62728";
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<Guide> guides;
};

/// Self-contained SVG with the panels stacked vertically.
void write_svg(std::ostream& out, const std::vector<Panel>& panels, double width = 860.0,
               double panel_height = 320.0);

}  // namespace kpp::plot
