#pragma once

#include <string>
#include <vector>

namespace avgps {

// Minimal static vector plots: one or more polylines over shared axes with
// optional shaded x-spans (used for attack windows).
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_series(const std::string& name, const std::vector<double>& xs,
                  const std::vector<double>& ys, const std::string& color);
  void add_shaded_span(double x0, double x1);
  void equal_axes(bool on) { equal_axes_ = on; }

  std::string render() const;
  void write(const std::string& path) const;

 private:
  struct Series {
    std::string name;
    std::vector<double> xs, ys;
    std::string color;
  };
  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  std::vector<std::pair<double, double>> spans_;
  bool equal_axes_ = false;
};

}  // namespace avgps
