// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Minimal standalone SVG output: a heatmap of a rectilinear grid field with
// optional polyline overlays and arrow glyphs.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace sparselab::svg {

/// Linear map of t in [0, 1] through dark blue -> cyan -> yellow -> dark red.
inline std::array<int, 3> color(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{
      {0.05, 0.05, 0.45}, {0.0, 0.55, 0.85}, {0.55, 0.85, 0.55}, {0.98, 0.85, 0.1}, {0.6, 0.05, 0.05}}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * (stops.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - i;
  std::array<int, 3> rgb{};
  for (int c = 0; c < 3; ++c)
    rgb[c] = static_cast<int>(std::lround(255.0 * ((1 - f) * stops[i][c] + f * stops[i + 1][c])));
  return rgb;
}

struct Arrow {
  double x, y, dx, dy;  // data coordinates
};

struct HeatmapOptions {
  std::string title;
  std::string x_label = "delta";
  std::string y_label = "rho";
  double vmin = NAN, vmax = NAN;  // NaN: data range
  int width = 520, height = 520;
  std::vector<std::vector<std::pair<double, double>>> overlays;
  std::vector<Arrow> arrows;
  std::string comment;  // embedded verbatim in an XML comment
};

/// values[i * ys.size() + j] is drawn as the cell centred on (xs[i], ys[j]);
/// x runs left to right, y bottom to top.
inline void write_heatmap(std::ostream& os, const std::vector<double>& xs, const std::vector<double>& ys,
                          const std::vector<double>& values, const HeatmapOptions& opt) {
  const double margin_l = 60, margin_b = 50, margin_t = 30, bar_w = 70;
  const double plot_w = opt.width - margin_l - bar_w, plot_h = opt.height - margin_t - margin_b;
  double vmin = opt.vmin, vmax = opt.vmax;
  if (std::isnan(vmin) || std::isnan(vmax)) {
    double lo = INFINITY, hi = -INFINITY;
    for (double v : values)
      if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
    if (std::isnan(vmin)) vmin = std::isfinite(lo) ? lo : 0.0;
    if (std::isnan(vmax)) vmax = std::isfinite(hi) ? hi : 1.0;
  }
  if (vmax <= vmin) vmax = vmin + 1.0;

  auto half_step = [](const std::vector<double>& v, std::size_t i) {
    if (v.size() < 2) return 0.5;
    return 0.5 * (i + 1 < v.size() ? v[i + 1] - v[i] : v[i] - v[i - 1]);
  };
  const double x_lo = xs.front() - half_step(xs, 0), x_hi = xs.back() + half_step(xs, xs.size() - 1);
  const double y_lo = ys.front() - half_step(ys, 0), y_hi = ys.back() + half_step(ys, ys.size() - 1);
  auto px = [&](double x) { return margin_l + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return margin_t + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  char buf[512];
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                opt.width, opt.height, opt.width, opt.height);
  os << buf;
  if (!opt.comment.empty()) {
    std::string safe = opt.comment;
    for (std::size_t p = safe.find("--"); p != std::string::npos; p = safe.find("--")) safe.replace(p, 2, "- -");
    os << "<!-- " << safe << " -->\n";
  }
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double xa = i == 0 ? x_lo : 0.5 * (xs[i - 1] + xs[i]);
    const double xb = i + 1 == xs.size() ? x_hi : 0.5 * (xs[i] + xs[i + 1]);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double ya = j == 0 ? y_lo : 0.5 * (ys[j - 1] + ys[j]);
      const double yb = j + 1 == ys.size() ? y_hi : 0.5 * (ys[j] + ys[j + 1]);
      const auto c = color((values[i * ys.size() + j] - vmin) / (vmax - vmin));
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"rgb(%d,%d,%d)\"/>\n", px(xa),
                    py(yb), px(xb) - px(xa) + 0.3, py(ya) - py(yb) + 0.3, c[0], c[1], c[2]);
      os << buf;
    }
  }
  for (const auto& line : opt.overlays) {
    os << "<polyline fill=\"none\" stroke=\"white\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : line) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
      os << buf;
    }
    os << "\"/>\n";
  }
  for (const auto& a : opt.arrows) {
    const double x0 = px(a.x), y0 = py(a.y), x1 = px(a.x + a.dx), y1 = py(a.y + a.dy);
    const double ang = std::atan2(y1 - y0, x1 - x0), len = std::hypot(x1 - x0, y1 - y0);
    if (len < 0.5) continue;
    const double head = std::min(4.0, 0.4 * len);
    std::snprintf(buf, sizeof buf,
                  "<path d=\"M%.2f,%.2f L%.2f,%.2f M%.2f,%.2f L%.2f,%.2f L%.2f,%.2f\" stroke=\"black\" "
                  "stroke-width=\"0.7\" fill=\"none\"/>\n",
                  x0, y0, x1, y1, x1 - head * std::cos(ang - 0.5), y1 - head * std::sin(ang - 0.5), x1, y1,
                  x1 - head * std::cos(ang + 0.5), y1 - head * std::sin(ang + 0.5));
    os << buf;
  }
  // Frame, ticks and labels.
  std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
                margin_l, margin_t, plot_w, plot_h);
  os << buf;
  for (int t = 0; t <= 4; ++t) {
    const double fx = x_lo + (x_hi - x_lo) * t / 4.0, fy = y_lo + (y_hi - y_lo) * t / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"middle\">%.3g</text>\n"
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"end\">%.3g</text>\n",
                  px(fx), margin_t + plot_h + 15, fx, margin_l - 4, py(fy) + 4, fy);
    os << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.2f\" y=\"%.2f\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n"
                "<text x=\"14\" y=\"%.2f\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 %.2f)\">%s</text>\n"
                "<text x=\"%.2f\" y=\"18\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n",
                margin_l + plot_w / 2, static_cast<double>(opt.height) - 12, opt.x_label.c_str(), margin_t + plot_h / 2,
                margin_t + plot_h / 2, opt.y_label.c_str(), margin_l + plot_w / 2, opt.title.c_str());
  os << buf;
  // Color bar.
  const double bx = margin_l + plot_w + 15;
  for (int s = 0; s < 64; ++s) {
    const auto c = color((s + 0.5) / 64.0);
    std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"14\" height=\"%.2f\" fill=\"rgb(%d,%d,%d)\"/>\n",
                  bx, margin_t + plot_h * (1 - (s + 1) / 64.0), plot_h / 64.0 + 0.3, c[0], c[1], c[2]);
    os << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\">%.3g</text>\n<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\">%.3g</text>\n",
                bx + 17, margin_t + 10, vmax, bx + 17, margin_t + plot_h, vmin);
  os << buf;
  os << "</svg>\n";
}

struct Series {
  std::vector<double> x, y;
  std::string label;
  std::string stroke = "black";
  bool dashed = false;
  bool markers = false;  // dots instead of a polyline
};

struct LinePlotOptions {
  std::string title;
  std::string x_label = "index";
  std::string y_label = "value";
  bool log_y = false;
  int width = 560, height = 420;
  std::string comment;
};

/// Line (or dot) plot of several series on shared axes; nonpositive values
/// are skipped on a log axis.
inline void write_line_plot(std::ostream& os, const std::vector<Series>& series, const LinePlotOptions& opt) {
  const double margin_l = 70, margin_r = 20, margin_b = 50, margin_t = 30;
  const double plot_w = opt.width - margin_l - margin_r, plot_h = opt.height - margin_t - margin_b;
  auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };
  auto usable = [&](double v) { return std::isfinite(v) && (!opt.log_y || v > 0.0); };
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.y[i]) || !std::isfinite(s.x[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, ty(s.y[i]));
      y_hi = std::max(y_hi, ty(s.y[i]));
    }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (x_hi <= x_lo) x_hi = x_lo + 1;
  if (y_hi <= y_lo) y_hi = y_lo + 1;
  auto px = [&](double x) { return margin_l + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return margin_t + (y_hi - ty(y)) / (y_hi - y_lo) * plot_h; };

  char buf[512];
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                opt.width, opt.height, opt.width, opt.height);
  os << buf;
  if (!opt.comment.empty()) {
    std::string safe = opt.comment;
    for (std::size_t p = safe.find("--"); p != std::string::npos; p = safe.find("--")) safe.replace(p, 2, "- -");
    os << "<!-- " << safe << " -->\n";
  }
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& s : series) {
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!usable(s.y[i])) continue;
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" fill=\"%s\"/>\n", px(s.x[i]), py(s.y[i]),
                      s.stroke.c_str());
        os << buf;
      }
      continue;
    }
    os << "<polyline fill=\"none\" stroke=\"" << s.stroke << "\" stroke-width=\"1.5\""
       << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.y[i])) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
      os << buf;
    }
    os << "\"/>\n";
  }
  std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
                margin_l, margin_t, plot_w, plot_h);
  os << buf;
  for (int t = 0; t <= 4; ++t) {
    const double fx = x_lo + (x_hi - x_lo) * t / 4.0, fy = y_lo + (y_hi - y_lo) * t / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"middle\">%.3g</text>\n"
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"end\">%s%.3g</text>\n",
                  px(fx), margin_t + plot_h + 15, fx, margin_l - 4, margin_t + (y_hi - fy) / (y_hi - y_lo) * plot_h + 4,
                  opt.log_y ? "1e" : "", fy);
    os << buf;
  }
  double ly = margin_t + 14;
  for (const auto& s : series) {
    if (s.label.empty()) continue;
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" fill=\"%s\" text-anchor=\"end\">%s</text>\n",
                  margin_l + plot_w - 6, ly, s.stroke.c_str(), s.label.c_str());
    os << buf;
    ly += 14;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.2f\" y=\"%.2f\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n"
                "<text x=\"14\" y=\"%.2f\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 %.2f)\">%s</text>\n"
                "<text x=\"%.2f\" y=\"18\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n",
                margin_l + plot_w / 2, static_cast<double>(opt.height) - 12, opt.x_label.c_str(), margin_t + plot_h / 2,
                margin_t + plot_h / 2, opt.y_label.c_str(), margin_l + plot_w / 2, opt.title.c_str());
  os << buf;
  os << "</svg>\n";
}

}  // namespace sparselab::svg
