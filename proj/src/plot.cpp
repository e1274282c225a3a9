// Copyright 2026 The stripdet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stripdet/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "stripdet/descriptive.hpp"
#include "stripdet/error.hpp"

namespace stripdet {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 72, kRight = 24, kTop = 40, kBottom = 52;

struct Series {
  std::vector<double> x, y;
  std::string color;
  bool line = true;
  bool points = false;
  std::string name;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

int column(const Table& t, const std::vector<std::string>& names, bool required) {
  for (const auto& n : names) {
    auto it = std::find(t.columns().begin(), t.columns().end(), n);
    if (it != t.columns().end()) return static_cast<int>(it - t.columns().begin());
  }
  if (required) throw ConfigError("table lacks a column named " + names.front());
  return -1;
}

std::vector<double> values(const Table& t, int col) {
  std::vector<double> out;
  if (col < 0) return out;
  for (const auto& row : t.rows()) {
    const std::string& cell = row[static_cast<std::size_t>(col)];
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

class Canvas {
 public:
  Canvas(double x0, double x1, double y0, double y1, bool log_y)
      : x0_(x0), x1_(x1), y0_(y0), y1_(y1), log_y_(log_y) {
    if (!(x1_ > x0_)) x1_ = x0_ + 1;
    if (!(y1_ > y0_)) y1_ = y0_ + 1;
  }

  double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
  double py(double y) const {
    const double v = log_y_ ? std::log10(y) : y;
    return kHeight - kBottom - (v - y0_) / (y1_ - y0_) * (kHeight - kTop - kBottom);
  }
  bool visible(double x, double y) const {
    return std::isfinite(x) && std::isfinite(y) && (!log_y_ || y > 0);
  }

  std::string axes(const std::string& title, const std::string& xlabel,
                   const std::string& ylabel) const {
    std::ostringstream os;
    const double bx = kLeft, by = kHeight - kBottom, tx = kWidth - kRight, ty = kTop;
    os << "<rect x=\"" << bx << "\" y=\"" << ty << "\" width=\"" << tx - bx << "\" height=\""
       << by - ty << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
      const double x = x0_ + (x1_ - x0_) * i / 5.0;
      const double p = px(x);
      os << "<line x1=\"" << p << "\" y1=\"" << by << "\" x2=\"" << p << "\" y2=\"" << by + 5
         << "\" stroke=\"black\"/>\n"
         << "<text x=\"" << p << "\" y=\"" << by + 18
         << "\" text-anchor=\"middle\" font-size=\"11\">" << num(x) << "</text>\n";
    }
    if (log_y_) {
      for (int e = static_cast<int>(std::ceil(y0_)); e <= static_cast<int>(std::floor(y1_)); ++e)
        ytick(os, std::pow(10.0, e), "1e" + std::to_string(e));
    } else {
      for (int i = 0; i <= 5; ++i) {
        const double y = y0_ + (y1_ - y0_) * i / 5.0;
        ytick(os, y, num(y));
      }
    }
    os << "<text x=\"" << (bx + tx) / 2 << "\" y=\"" << kHeight - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(xlabel) << "</text>\n"
       << "<text x=\"16\" y=\"" << (by + ty) / 2 << "\" text-anchor=\"middle\" font-size=\"12\""
       << " transform=\"rotate(-90 16 " << (by + ty) / 2 << ")\">" << escape(ylabel)
       << "</text>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(title) << "</text>\n";
    return os.str();
  }

  std::string draw(const Series& s) const {
    std::ostringstream os;
    if (s.line) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (visible(s.x[i], s.y[i])) os << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
      os << "\"/>\n";
    }
    if (s.points) {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (visible(s.x[i], s.y[i]))
          os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
             << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }
    return os.str();
  }

  std::string error_bars(const std::vector<double>& x, const std::vector<double>& y,
                         const std::vector<double>& e) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!visible(x[i], y[i]) || !std::isfinite(e[i])) continue;
      os << "<line x1=\"" << num(px(x[i])) << "\" y1=\"" << num(py(y[i] - e[i])) << "\" x2=\""
         << num(px(x[i])) << "\" y2=\"" << num(py(y[i] + e[i]))
         << "\" stroke=\"black\"/>\n";
    }
    return os.str();
  }

 private:
  void ytick(std::ostringstream& os, double y, const std::string& label) const {
    const double p = py(y);
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << p << "\" x2=\"" << kLeft << "\" y2=\"" << p
       << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << kLeft - 8 << "\" y=\"" << p + 4
       << "\" text-anchor=\"end\" font-size=\"11\">" << label << "</text>\n";
  }

  double x0_, x1_, y0_, y1_;
  bool log_y_;
};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return lo > hi; }
};

std::string document(const Canvas& c, const std::string& title, const std::string& xl,
                     const std::string& yl, const std::vector<Series>& series,
                     const std::string& extra = "") {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << c.axes(title, xl, yl);
  double ly = kTop + 14;
  for (const auto& s : series) {
    os << c.draw(s);
    if (!s.name.empty()) {
      os << "<text x=\"" << kWidth - kRight - 8 << "\" y=\"" << ly
         << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << s.color << "\">"
         << escape(s.name) << "</text>\n";
      ly += 14;
    }
  }
  os << extra << "</svg>\n";
  return os.str();
}

/// rate r with bound == exp(-K / r) on every row, or 0.
double recognize_rate(const std::vector<double>& k, const std::vector<double>& bound) {
  for (double r : {4.0, 2.0}) {
    bool all = !k.empty();
    for (std::size_t i = 0; i < k.size() && all; ++i)
      all = std::abs(bound[i] - std::exp(-k[i] / r)) <= 1e-12 * std::max(1.0, bound[i]);
    if (all) return r;
  }
  return 0.0;
}

std::string rate_name(double r) { return r == 4.0 ? "exp(-K/4)" : r == 2.0 ? "exp(-K/2)" : "exp(-K/" + num(r) + ")"; }

PlotOutput tail_plot(const Table& t, const std::string& title, std::optional<double> rate) {
  const bool empty = t.rows().empty();
  const auto k = values(t, column(t, {"K", "k"}, !empty));
  const auto frac = values(t, column(t, {"fraction"}, !empty));
  const auto bound = values(t, column(t, {"bound"}, false));
  PlotOutput out;
  std::vector<double> overlay(k.size(), std::numeric_limits<double>::quiet_NaN());
  if (rate) {
    out.overlay = rate_name(*rate);
    for (std::size_t i = 0; i < k.size(); ++i) overlay[i] = std::exp(-k[i] / *rate);
  } else if (!bound.empty()) {
    const double r = recognize_rate(k, bound);
    out.overlay = r > 0 ? rate_name(r) : "bound";
    overlay = bound;
  } else if (empty) {
    out.overlay = "";
  }
  Table data({"K", "fraction", "overlay"});
  Range xr, yr;
  for (std::size_t i = 0; i < k.size(); ++i) {
    data.add_row(std::vector<double>{k[i], frac[i], overlay[i]});
    xr.add(k[i]);
    for (double v : {frac[i], overlay[i]})
      if (v > 0) yr.add(std::log10(v));
  }
  out.data_csv = data.to_csv();
  if (xr.empty()) xr = {0.0, 1.0};
  if (yr.empty()) yr = {-4.0, 0.0};
  const Canvas c(xr.lo, xr.hi, std::floor(yr.lo), std::max(0.0, std::ceil(yr.hi)), true);
  std::vector<Series> s;
  s.push_back({k, frac, "#1f77b4", true, true, empty ? "" : "empirical"});
  if (!out.overlay.empty()) s.push_back({k, overlay, "#d62728", true, false, out.overlay});
  out.svg = document(c, title.empty() ? "tail" : title, "K", "fraction", s);
  return out;
}

PlotOutput fit_plot(const Table& t, const std::string& title) {
  const bool empty = t.rows().empty();
  const int xc = column(t, {"sites", "N", "N2", "x", "n"}, !empty);
  const int yc = column(t, {"var", "variance", "gap", "y", "C"}, !empty);
  const auto x = values(t, xc);
  const auto y = values(t, yc);
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::isfinite(x[i]) && std::isfinite(y[i])) {
      fx.push_back(x[i]);
      fy.push_back(y[i]);
    }
  PlotOutput out;
  std::vector<double> fitted(x.size(), std::numeric_limits<double>::quiet_NaN());
  LinearFit f;
  const bool have_fit = fx.size() >= 2;
  if (have_fit) {
    f = linear_fit(fx, fy);
    for (std::size_t i = 0; i < x.size(); ++i) fitted[i] = f.intercept + f.slope * x[i];
    out.overlay = "least squares";
  }
  Table data({"x", "y", "fitted"});
  Range xr, yr;
  for (std::size_t i = 0; i < x.size(); ++i) {
    data.add_row(std::vector<double>{x[i], y[i], fitted[i]});
    xr.add(x[i]);
    yr.add(y[i]);
    yr.add(fitted[i]);
  }
  out.data_csv = data.to_csv();
  if (xr.empty()) xr = {0.0, 1.0};
  if (yr.empty()) yr = {0.0, 1.0};
  const double pad = 0.05 * (yr.hi - yr.lo);
  const Canvas c(xr.lo, xr.hi, yr.lo - pad, yr.hi + pad, false);
  std::vector<Series> s;
  s.push_back({x, y, "#1f77b4", false, true, empty ? "" : "data"});
  if (have_fit)
    s.push_back({x, fitted, "#d62728", true, false,
                 "slope " + num(f.slope) + ", R^2 " + num(f.r_squared)});
  const std::string xl = xc >= 0 ? t.columns()[static_cast<std::size_t>(xc)] : "x";
  const std::string yl = yc >= 0 ? t.columns()[static_cast<std::size_t>(yc)] : "y";
  out.svg = document(c, title.empty() ? "fit" : title, xl, yl, s);
  return out;
}

PlotOutput spectrum_plot(const Table& t, const std::string& title) {
  const bool empty = t.rows().empty();
  const auto idx = values(t, column(t, {"index"}, !empty));
  const auto g = values(t, column(t, {"gamma"}, !empty));
  auto err = values(t, column(t, {"stderr"}, false));
  if (err.empty()) err.assign(g.size(), 0.0);
  Table data({"index", "gamma", "stderr"});
  Range xr, yr;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    data.add_row(std::vector<double>{idx[i], g[i], err[i]});
    xr.add(idx[i]);
    yr.add(g[i] - err[i]);
    yr.add(g[i] + err[i]);
  }
  yr.add(0.0);
  PlotOutput out;
  out.data_csv = data.to_csv();
  if (xr.empty()) xr = {0.0, 1.0};
  const double pad = 0.05 * std::max(1e-12, yr.hi - yr.lo);
  const Canvas c(xr.lo - 0.5, xr.hi + 0.5, yr.lo - pad, yr.hi + pad, false);
  out.svg = document(c, title.empty() ? "Lyapunov spectrum" : title, "index", "gamma",
                     {{idx, g, "#1f77b4", false, true, ""}}, c.error_bars(idx, g, err));
  return out;
}

}  // namespace

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "tail") return PlotKind::Tail;
  if (name == "fit") return PlotKind::Fit;
  if (name == "spectrum") return PlotKind::Spectrum;
  throw ConfigError("unknown plot kind: " + name);
}

PlotOutput plot_export(const Table& table, PlotKind kind, const std::string& title,
                       std::optional<double> tail_rate) {
  switch (kind) {
    case PlotKind::Tail: return tail_plot(table, title, tail_rate);
    case PlotKind::Fit: return fit_plot(table, title);
    case PlotKind::Spectrum: return spectrum_plot(table, title);
  }
  throw ConfigError("unknown plot kind");
}

PlotOutput plot_export_csv(const std::string& csv, PlotKind kind, const std::string& title,
                           std::optional<double> tail_rate) {
  const bool blank = csv.find_first_not_of(" \t\r\n") == std::string::npos;
  if (blank) {
    static const char* kHeaders[] = {"K,fraction\n", "x,y\n", "index,gamma\n"};
    return plot_export(Table::from_csv(kHeaders[static_cast<int>(kind)]), kind, title,
                       tail_rate);
  }
  return plot_export(Table::from_csv(csv), kind, title, tail_rate);
}

}  // namespace stripdet
