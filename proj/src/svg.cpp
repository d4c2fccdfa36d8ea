#include "avgps/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace avgps {

namespace {
constexpr double kWidth = 760, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}
}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_series(const std::string& name, const std::vector<double>& xs,
                         const std::vector<double>& ys, const std::string& color) {
  series_.push_back({name, xs, ys, color});
}

void SvgPlot::add_shaded_span(double x0, double x1) { spans_.push_back({x0, x1}); }

std::string SvgPlot::render() const {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Series& s : series_)
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      xmin = std::min(xmin, s.xs[i]);
      xmax = std::max(xmax, s.xs[i]);
      ymin = std::min(ymin, s.ys[i]);
      ymax = std::max(ymax, s.ys[i]);
    }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  if (equal_axes_) {
    double span = std::max(xmax - xmin, ymax - ymin);
    double xc = 0.5 * (xmin + xmax), yc = 0.5 * (ymin + ymax);
    xmin = xc - 0.5 * span;
    xmax = xc + 0.5 * span;
    ymin = yc - 0.5 * span;
    ymax = yc + 0.5 * span;
  }
  double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
      << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n";

  for (auto [a, b] : spans_) {
    double x0 = std::clamp(sx(a), kLeft, kLeft + pw);
    double x1 = std::clamp(sx(b), kLeft, kLeft + pw);
    if (x1 > x0)
      out << "<rect x='" << fmt(x0) << "' y='" << kTop << "' width='" << fmt(x1 - x0)
          << "' height='" << ph << "' fill='#f6c6c6' opacity='0.55'/>\n";
  }

  // Frame and tick labels.
  out << "<rect x='" << kLeft << "' y='" << kTop << "' width='" << pw << "' height='" << ph
      << "' fill='none' stroke='#555'/>\n";
  for (int i = 0; i <= 4; ++i) {
    double fx = xmin + (xmax - xmin) * i / 4.0;
    double fy = ymin + (ymax - ymin) * i / 4.0;
    out << "<text x='" << fmt(sx(fx)) << "' y='" << kHeight - kBottom + 18
        << "' font-size='11' text-anchor='middle' fill='#333'>" << fmt(fx) << "</text>\n";
    out << "<text x='" << kLeft - 8 << "' y='" << fmt(sy(fy) + 4)
        << "' font-size='11' text-anchor='end' fill='#333'>" << fmt(fy) << "</text>\n";
  }
  out << "<text x='" << kWidth / 2 << "' y='22' font-size='15' text-anchor='middle'>" << title_
      << "</text>\n";
  out << "<text x='" << kWidth / 2 << "' y='" << kHeight - 12
      << "' font-size='12' text-anchor='middle'>" << x_label_ << "</text>\n";
  out << "<text x='16' y='" << kHeight / 2
      << "' font-size='12' text-anchor='middle' transform='rotate(-90 16 " << kHeight / 2
      << ")'>" << y_label_ << "</text>\n";

  int legend_y = static_cast<int>(kTop) + 14;
  for (const Series& s : series_) {
    out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.4' points='";
    for (std::size_t i = 0; i < s.xs.size(); ++i)
      out << fmt(sx(s.xs[i])) << ',' << fmt(sy(s.ys[i])) << ' ';
    out << "'/>\n";
    out << "<text x='" << kLeft + pw - 6 << "' y='" << legend_y
        << "' font-size='11' text-anchor='end' fill='" << s.color << "'>" << s.name
        << "</text>\n";
    legend_y += 14;
  }
  out << "</svg>\n";
  return out.str();
}

void SvgPlot::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write plot: " + path);
  f << render();
}

}  // namespace avgps
