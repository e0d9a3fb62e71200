#include "wpidos/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "wpidos/errors.hpp"

namespace wpidos::harness {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 180.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  bool log = true;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double map(double v) const { return log ? std::log10(v) : v; }
  void include(double v) {
    lo = std::min(lo, map(v));
    hi = std::max(hi, map(v));
  }
  void finish() {
    if (!(hi > lo)) {
      const double pad = std::isfinite(lo) ? std::max(1.0, std::abs(lo)) * 0.5 : 1.0;
      lo = std::isfinite(lo) ? lo - pad : 0.0;
      hi = lo + 2.0 * pad;
    }
  }
  double frac(double v) const { return (map(v) - lo) / (hi - lo); }
};

std::string tick_label(const Axis& axis, double mapped) {
  std::ostringstream s;
  s.precision(3);
  if (axis.log)
    s << "1e" << static_cast<int>(std::round(mapped));
  else
    s << mapped;
  return s.str();
}

}  // namespace

void write_line_plot(std::ostream& out, const PlotSpec& spec, const std::vector<Series>& series) {
  Axis ax{spec.log_x}, ay{spec.log_y};
  for (const Series& s : series)
    for (Eigen::Index i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (ax.usable(s.x[i]) && ay.usable(s.y[i])) {
        ax.include(s.x[i]);
        ay.include(s.y[i]);
      }
  ax.finish();
  ay.finish();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double v) { return kLeft + ax.frac(v) * pw; };
  const auto py = [&](double v) { return kTop + (1.0 - ay.frac(v)) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(spec.title) << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  const auto ticks = [](const Axis& a) {
    std::vector<double> t;
    if (a.log) {
      const int step = std::max(1, static_cast<int>(std::ceil((a.hi - a.lo) / 8.0)));
      for (int e = static_cast<int>(std::ceil(a.lo)); e <= std::floor(a.hi); e += step) t.push_back(e);
    } else {
      for (int i = 0; i <= 5; ++i) t.push_back(a.lo + (a.hi - a.lo) * i / 5.0);
    }
    return t;
  };
  for (double m : ticks(ax)) {
    const double x = kLeft + (m - ax.lo) / (ax.hi - ax.lo) * pw;
    out << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\"" << kTop + ph
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << tick_label(ax, m)
        << "</text>\n";
  }
  for (double m : ticks(ay)) {
    const double y = kTop + (1.0 - (m - ay.lo) / (ay.hi - ay.lo)) * ph;
    out << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << y
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << tick_label(ay, m)
        << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
      << escape(spec.x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const Series& line = series[s];
    const char* color = kColors[s % std::size(kColors)];
    std::ostringstream points;
    points.precision(6);
    for (Eigen::Index i = 0; i < std::min(line.x.size(), line.y.size()); ++i)
      if (ax.usable(line.x[i]) && ay.usable(line.y[i])) points << px(line.x[i]) << ',' << py(line.y[i]) << ' ';
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
        << (line.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << points.str() << "\"/>\n";
    if (line.markers)
      for (Eigen::Index i = 0; i < std::min(line.x.size(), line.y.size()); ++i)
        if (ax.usable(line.x[i]) && ay.usable(line.y[i]))
          out << "<circle cx=\"" << px(line.x[i]) << "\" cy=\"" << py(line.y[i]) << "\" r=\"2.5\" fill=\"" << color
              << "\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(s);
    out << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - kRight + 36
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"1.5\""
        << (line.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    out << "<text x=\"" << kWidth - kRight + 42 << "\" y=\"" << ly + 4 << "\">" << escape(line.label) << "</text>\n";
  }
  out << "</svg>\n";
}

void save_line_plot(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<Series>& series) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open " + path.string() + " for writing");
  write_line_plot(out, spec, series);
}

}  // namespace wpidos::harness
