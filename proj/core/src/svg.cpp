#include "nlop/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nlop {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMargin = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::ofstream open_svg(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out;
}

void close_svg(std::ofstream& out) { out << "</svg>\n"; }

void title_text(std::ofstream& out, const std::string& title) {
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

void write_xy_plot(const std::string& path, const std::vector<SvgSeries>& series,
                   const std::string& title, const std::string& xlabel,
                   const std::string& ylabel, bool logx, bool logy) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto tx = [logx](double v) { return logx ? std::log10(v) : v; };
  auto ty = [logy](double v) { return logy ? std::log10(v) : v; };
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if ((logx && s.x[k] <= 0.0) || (logy && s.y[k] <= 0.0)) continue;
      xmin = std::min(xmin, tx(s.x[k]));
      xmax = std::max(xmax, tx(s.x[k]));
      ymin = std::min(ymin, ty(s.y[k]));
      ymax = std::max(ymax, ty(s.y[k]));
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  double pad_x = 0.05 * (xmax - xmin), pad_y = 0.05 * (ymax - ymin);
  xmin -= pad_x;
  xmax += pad_x;
  ymin -= pad_y;
  ymax += pad_y;

  auto px = [&](double v) {
    return kMargin + (tx(v) - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin);
  };
  auto py = [&](double v) {
    return kHeight - kMargin - (ty(v) - ymin) / (ymax - ymin) * (kHeight - 2 * kMargin);
  };

  std::ofstream out = open_svg(path);
  title_text(out, title);
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    double fx = xmin + (xmax - xmin) * t / 4.0;
    double fy = ymin + (ymax - ymin) * t / 4.0;
    double gx = kMargin + (kWidth - 2.0 * kMargin) * t / 4.0;
    double gy = kHeight - kMargin - (kHeight - 2.0 * kMargin) * t / 4.0;
    out << "<text x=\"" << gx << "\" y=\"" << kHeight - kMargin + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(logx ? std::pow(10.0, fx) : fx) << "</text>\n";
    out << "<text x=\"" << kMargin - 8 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(logy ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << kHeight / 2 << ")\">" << ylabel << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if ((logx && s.x[k] <= 0.0) || (logy && s.y[k] <= 0.0)) continue;
      out << px(s.x[k]) << "," << py(s.y[k]) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMargin - 6 << "\" y=\"" << kMargin + 16 + 16 * si
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
        << "\">" << s.label << "</text>\n";
  }
  close_svg(out);
}

void write_polar_plot(const std::string& path, const std::vector<SvgSeries>& series,
                      const std::string& title) {
  double vmax = 0.0;
  for (const auto& s : series)
    for (double v : s.y) vmax = std::max(vmax, std::abs(v));
  if (vmax <= 0.0) vmax = 1.0;
  double cx = kWidth / 2.0, cy = (kHeight + 30) / 2.0;
  double rad = 0.5 * (kHeight - 2 * kMargin);

  std::ofstream out = open_svg(path);
  title_text(out, title);
  for (double f : {0.25, 0.5, 0.75, 1.0}) {
    out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << rad * f
        << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
    out << "<text x=\"" << cx + 4 << "\" y=\"" << cy - rad * f - 3
        << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#888888\">" << fmt(vmax * f)
        << "</text>\n";
  }
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k <= s.x.size(); ++k) {
      std::size_t m = k % s.x.size();
      double r = rad * std::abs(s.y[m]) / vmax;
      out << cx + r * std::cos(s.x[m]) << "," << cy - r * std::sin(s.x[m]) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMargin - 6 << "\" y=\"" << kMargin + 16 + 16 * si
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
        << "\">" << s.label << "</text>\n";
  }
  close_svg(out);
}

void write_point_plot(const std::string& path, const std::vector<Vec2>& points,
                      const std::string& title) {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
  for (Vec2 p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  double span = std::max(xmax - xmin, ymax - ymin);
  auto px = [&](double v) { return kMargin + (v - xmin) / span * (kWidth - 2 * kMargin); };
  auto py = [&](double v) { return kHeight - kMargin - (v - ymin) / span * (kHeight - 2 * kMargin); };
  std::ofstream out = open_svg(path);
  title_text(out, title);
  for (Vec2 p : points)
    out << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y)
        << "\" r=\"1.5\" fill=\"#1f77b4\"/>\n";
  close_svg(out);
}

}  // namespace nlop
