#include "qkr/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qkr::svg {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  if (v != 0.0 && (std::abs(v) >= 1e5 || std::abs(v) < 1e-3)) {
    std::snprintf(buf, sizeof buf, "%.0e", v);
  } else {
    std::snprintf(buf, sizeof buf, "%g", v);
  }
  return buf;
}

}  // namespace

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(target, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series) {
  const double left = 90, right = 190, top = 50, bottom = 65;
  const double pw = spec.width - left - right;
  const double ph = spec.height - top - bottom;

  auto xval = [&](double x) { return spec.log_x ? std::log10(x) : x; };
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (spec.log_x && !(s.x[i] > 0.0)) continue;
      if (!std::isfinite(s.y[i])) continue;
      x_lo = std::min(x_lo, xval(s.x[i]));
      x_hi = std::max(x_hi, xval(s.x[i]));
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!std::isfinite(x_lo)) { x_lo = 0; x_hi = 1; y_lo = 0; y_hi = 1; }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1;
  if (!(y_hi > y_lo)) { y_hi = y_lo + 1; }
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  auto px = [&](double x) { return left + (xval(x) - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
     << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n";
  if (!spec.comment.empty()) {
    std::string c = spec.comment;
    // "--" is not allowed inside XML comments.
    for (std::size_t p; (p = c.find("--")) != std::string::npos;) c.replace(p, 2, "- -");
    os << "<!-- " << c << " -->\n";
  }
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n"
     << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">"
     << xml_escape(spec.title) << "</text>\n"
     << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw)
     << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  // x axis
  if (spec.log_x) {
    for (int e = static_cast<int>(std::floor(x_lo)); e <= static_cast<int>(std::ceil(x_hi)); ++e) {
      if (e < x_lo - 1e-9 || e > x_hi + 1e-9) continue;
      const double x = left + (e - x_lo) / (x_hi - x_lo) * pw;
      os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(x)
         << "\" y2=\"" << fmt(top + ph + 6) << "\" stroke=\"black\"/>\n"
         << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(top + ph + 20)
         << "\" text-anchor=\"middle\">" << tick_label(std::pow(10.0, e)) << "</text>\n";
    }
  } else {
    for (double t : nice_ticks(x_lo, x_hi)) {
      const double x = px(t);
      os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(x)
         << "\" y2=\"" << fmt(top + ph + 6) << "\" stroke=\"black\"/>\n"
         << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(top + ph + 20)
         << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
    }
  }
  for (double t : nice_ticks(y_lo, y_hi)) {
    const double y = py(t);
    os << "<line x1=\"" << fmt(left - 6) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(left)
       << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << fmt(left - 9) << "\" y=\"" << fmt(y + 4)
       << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  os << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(spec.height - 18.0)
     << "\" text-anchor=\"middle\">" << xml_escape(spec.x_label) << "</text>\n"
     << "<text transform=\"translate(22," << fmt(top + ph / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(spec.y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    os << "<polyline fill=\"none\" stroke=\"" << xml_escape(s.color) << "\" stroke-width=\""
       << fmt(s.stroke_width) << '"';
    if (!s.dash.empty()) os << " stroke-dasharray=\"" << xml_escape(s.dash) << '"';
    os << " points=\"";
    for (std::size_t j = 0; j < s.x.size() && j < s.y.size(); ++j) {
      if (spec.log_x && !(s.x[j] > 0.0)) continue;
      if (!std::isfinite(s.y[j])) continue;
      os << fmt(px(s.x[j])) << ',' << fmt(py(s.y[j])) << ' ';
    }
    os << "\"/>\n";
    const double ly = top + 14 + 20.0 * static_cast<double>(i);
    const double lx = left + pw + 12;
    os << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 26)
       << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << xml_escape(s.color) << "\" stroke-width=\""
       << fmt(s.stroke_width) << '"';
    if (!s.dash.empty()) os << " stroke-dasharray=\"" << xml_escape(s.dash) << '"';
    os << "/>\n<text x=\"" << fmt(lx + 32) << "\" y=\"" << fmt(ly + 4) << "\">"
       << xml_escape(s.label) << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace qkr::svg
