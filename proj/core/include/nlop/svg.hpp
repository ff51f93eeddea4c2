#pragma once

#include <string>
#include <vector>

#include "nlop/geometry.hpp"

namespace nlop {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Cartesian line plot; log-scale axes take the log10 of the data and label
/// ticks with the original values.
void write_xy_plot(const std::string& path, const std::vector<SvgSeries>& series,
                   const std::string& title, const std::string& xlabel,
                   const std::string& ylabel, bool logx = false, bool logy = false);

/// Polar plot of value(angle); one closed curve per series plus the unit
/// reference circle.
void write_polar_plot(const std::string& path, const std::vector<SvgSeries>& series,
                      const std::string& title);

/// Scatter of 2D points (free-boundary polyline and similar).
void write_point_plot(const std::string& path, const std::vector<Vec2>& points,
                      const std::string& title);

}  // namespace nlop
