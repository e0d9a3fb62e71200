#pragma once

// Static SVG line charts with optional log axes.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wpidos::harness {

struct Series {
  std::string label;
  Eigen::ArrayXd x;
  Eigen::ArrayXd y;
  bool dashed = false;
  bool markers = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  bool log_y = true;
};

/// Points with non-finite coordinates, or non-positive ones on a log axis,
/// are skipped.
void write_line_plot(std::ostream& out, const PlotSpec& spec, const std::vector<Series>& series);
void save_line_plot(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace wpidos::harness
