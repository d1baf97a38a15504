#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace psdrank::svg {

struct Point {
  double x, y;
  std::string color;
};

// Scatter plot over [x0,x1] x [y0,y1] with axis labels and an optional title.
class Scatter {
 public:
  Scatter(double x0, double x1, double y0, double y1) : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {}

  void add(double x, double y, std::string color) { points_.push_back({x, y, std::move(color)}); }
  void set_title(std::string t) { title_ = std::move(t); }
  void set_labels(std::string x, std::string y) {
    xlabel_ = std::move(x);
    ylabel_ = std::move(y);
  }
  void add_comment(std::string c) { comments_.push_back(std::move(c)); }

  std::string render(double radius = 2.0) const {
    const double w = 520, h = 520, m = 50;
    auto sx = [&](double x) { return m + (x - x0_) / (x1_ - x0_) * (w - 2 * m); };
    auto sy = [&](double y) { return h - m - (y - y0_) / (y1_ - y0_) * (h - 2 * m); };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    for (const auto& c : comments_) os << "<!-- " << c << " -->\n";
    os << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << w - 2 * m << "\" height=\"" << h - 2 * m
       << "\" fill=\"white\" stroke=\"black\"/>\n";
    for (const auto& p : points_)
      os << "<circle cx=\"" << fmt(sx(p.x)) << "\" cy=\"" << fmt(sy(p.y)) << "\" r=\"" << radius << "\" fill=\""
         << p.color << "\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">" << xlabel_ << "</text>\n";
    os << "<text x=\"14\" y=\"" << h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << h / 2 << ")\">"
       << ylabel_ << "</text>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"28\" text-anchor=\"middle\">" << title_ << "</text>\n";
    os << "<text x=\"" << m << "\" y=\"" << h - m + 16 << "\">" << fmt(x0_) << "</text>\n";
    os << "<text x=\"" << w - m << "\" y=\"" << h - m + 16 << "\" text-anchor=\"end\">" << fmt(x1_) << "</text>\n";
    os << "<text x=\"" << m - 4 << "\" y=\"" << h - m << "\" text-anchor=\"end\">" << fmt(y0_) << "</text>\n";
    os << "<text x=\"" << m - 4 << "\" y=\"" << m + 10 << "\" text-anchor=\"end\">" << fmt(y1_) << "</text>\n";
    os << "</svg>\n";
    return os.str();
  }

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }

  double x0_, x1_, y0_, y1_;
  std::vector<Point> points_;
  std::vector<std::string> comments_;
  std::string title_, xlabel_, ylabel_;
};

}  // namespace psdrank::svg
