#include "kpp/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kpp::plot {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;  // room for the legend
constexpr double kTop = 30.0;
constexpr double kBottom = 45.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
double tick_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

void write_panel(std::ostream& out, const Panel& panel, double y0, double width,
                 double height) {
  Range xr;
  Range yr;
  for (const auto& s : panel.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  for (const auto& g : panel.guides) yr.add(g.y);
  xr.finish();
  yr.finish();
  const double pad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= pad;
  yr.hi += pad;

  const double pw = width - kLeft - kRight;
  const double ph = height - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return y0 + kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  out << "<g>\n";
  out << "<text x=\"" << kLeft << "\" y=\"" << y0 + 18 << "\" font-size=\"14\">"
      << escape(panel.title) << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << y0 + kTop << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";

  const double xs = tick_step(xr.hi - xr.lo, 6);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi + 1e-9 * xs; t += xs) {
    out << "<line x1=\"" << sx(t) << "\" y1=\"" << y0 + kTop + ph << "\" x2=\"" << sx(t)
        << "\" y2=\"" << y0 + kTop + ph + 5 << "\" stroke=\"#444\"/>"
        << "<text x=\"" << sx(t) << "\" y=\"" << y0 + kTop + ph + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  const double ys = tick_step(yr.hi - yr.lo, 5);
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi + 1e-9 * ys; t += ys) {
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy(t) << "\" x2=\"" << kLeft
        << "\" y2=\"" << sy(t) << "\" stroke=\"#444\"/>"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy(t) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << y0 + height - 8
      << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(panel.x_label) << "</text>\n";
  out << "<text transform=\"translate(16," << y0 + kTop + ph / 2
      << ") rotate(-90)\" font-size=\"12\" text-anchor=\"middle\">" << escape(panel.y_label)
      << "</text>\n";

  double legend_y = y0 + kTop + 12;
  const double legend_x = kLeft + pw + 12;
  for (const auto& g : panel.guides) {
    out << "<line x1=\"" << kLeft << "\" y1=\"" << sy(g.y) << "\" x2=\"" << kLeft + pw
        << "\" y2=\"" << sy(g.y) << "\" stroke=\"" << g.color
        << "\" stroke-dasharray=\"6,4\"/>\n";
    out << "<line x1=\"" << legend_x << "\" y1=\"" << legend_y - 4 << "\" x2=\""
        << legend_x + 20 << "\" y2=\"" << legend_y - 4 << "\" stroke=\"" << g.color
        << "\" stroke-dasharray=\"6,4\"/><text x=\"" << legend_x + 26 << "\" y=\"" << legend_y
        << "\" font-size=\"11\">" << escape(g.label) << " = " << fmt(g.y) << "</text>\n";
    legend_y += 16;
  }
  for (const auto& s : panel.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (n == 0) continue;
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      out << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
    }
    out << "\"/>\n";
    if (s.markers) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        out << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i]) << "\" r=\"3\" fill=\""
            << s.color << "\"/>\n";
      }
    }
    out << "<line x1=\"" << legend_x << "\" y1=\"" << legend_y - 4 << "\" x2=\""
        << legend_x + 20 << "\" y2=\"" << legend_y - 4 << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/><text x=\"" << legend_x + 26 << "\" y=\"" << legend_y
        << "\" font-size=\"11\">" << escape(s.label) << "</text>\n";
    legend_y += 16;
  }
  out << "</g>\n";
}

}  // namespace

void write_svg(std::ostream& out, const std::vector<Panel>& panels, double width,
               double panel_height) {
  const auto old_precision = out.precision(6);
  const double height = panel_height * static_cast<double>(std::max<std::size_t>(1, panels.size()));
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    write_panel(out, panels[i], panel_height * static_cast<double>(i), width, panel_height);
  }
  out << "</svg>\n";
  out.precision(old_precision);
}

}  // namespace kpp::plot
