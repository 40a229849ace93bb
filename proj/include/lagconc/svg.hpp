#pragma once

// Static SVG plots with a fixed viewport: Lagrangian projections, fronts,
// area-schedule heatmaps and chord-length tracks.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lagconc/coil.hpp"
#include "lagconc/errors.hpp"
#include "lagconc/geom.hpp"

namespace lagconc::svg {

inline constexpr int kWidth = 800;
inline constexpr int kHeight = 500;
inline constexpr int kMargin = 60;

inline std::string fixed(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s == "-0.00" || s == "-0.0" || s == "-0") s.erase(0, 1);
  return s;
}

inline std::string label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

/// Affine map of a data box onto the plot area; y grows upward.
class Canvas {
 public:
  Canvas(std::string title, double x0, double x1, double y0, double y1) : title_(std::move(title)) {
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) {
      double pad = y0 == 0.0 ? 1.0 : 0.5 * std::abs(y0);
      y0 -= pad;
      y1 += pad;
    }
    x0_ = x0, x1_ = x1, y0_ = y0, y1_ = y1;
  }

  double px(double x) const { return kMargin + (x - x0_) / (x1_ - x0_) * (kWidth - 2 * kMargin); }
  double py(double y) const { return kHeight - kMargin - (y - y0_) / (y1_ - y0_) * (kHeight - 2 * kMargin); }

  void add(const std::string& element) { body_ += element + "\n"; }

  void polyline(const std::vector<double>& x, const std::vector<double>& y, const std::string& stroke,
                double width = 1.0, bool closed = false) {
    std::string d;
    for (std::size_t i = 0; i < x.size(); ++i) {
      d += (i == 0 ? "M" : " L") + fixed(px(x[i])) + "," + fixed(py(y[i]));
    }
    if (closed) d += " Z";
    add("<path d=\"" + d + "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + fixed(width, 1) + "\"/>");
  }

  std::string str(const std::string& xlabel, const std::string& ylabel) const {
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) + "\" height=\"" +
           std::to_string(kHeight) + "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " + std::to_string(kHeight) +
           "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(kWidth) + "\" height=\"" + std::to_string(kHeight) +
           "\" fill=\"white\"/>\n";
    out += "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" " +
           "font-size=\"16\">" + title_ + "</text>\n";
    out += body_;
    const int w = kWidth - 2 * kMargin, h = kHeight - 2 * kMargin;
    out += "<rect x=\"" + std::to_string(kMargin) + "\" y=\"" + std::to_string(kMargin) + "\" width=\"" +
           std::to_string(w) + "\" height=\"" + std::to_string(h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    auto text = [&](double x, double y, const std::string& anchor, const std::string& s) {
      out += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" text-anchor=\"" + anchor +
             "\" font-family=\"sans-serif\" font-size=\"12\">" + s + "</text>\n";
    };
    text(kMargin, kHeight - kMargin + 16, "start", label(x0_));
    text(kWidth - kMargin, kHeight - kMargin + 16, "end", label(x1_));
    text(kMargin - 6, kHeight - kMargin, "end", label(y0_));
    text(kMargin - 6, kMargin + 10, "end", label(y1_));
    text(kWidth / 2.0, kHeight - 20, "middle", xlabel);
    text(18, kHeight / 2.0, "middle", ylabel);
    out += "</svg>\n";
    return out;
  }

 private:
  std::string title_;
  std::string body_;
  double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
};

namespace detail {

inline std::pair<double, double> bounds(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 1.0};
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

}  // namespace detail

/// Lagrangian projection (tau, p) of a slice as one closed path.
inline std::string projection(const ImmersedSlice& s, const std::string& title = "Lagrangian projection") {
  auto [y0, y1] = detail::bounds(s.p);
  const double pad = 0.05 * std::max(y1 - y0, 1e-12);
  Canvas c(title, s.tau.front(), s.tau.back(), y0 - pad, y1 + pad);
  c.polyline(s.tau, s.p, "#1f4e9a", 0.8);
  return c.str("theta", "p");
}

/// Front (tau, z) of a lifted slice.
inline std::string front(const ImmersedSlice& s, const std::string& title = "Front") {
  if (s.z.size() != s.tau.size()) fail(ErrorKind::InvalidArgument, "front plot needs a lifted slice");
  auto [y0, y1] = detail::bounds(s.z);
  const double pad = 0.05 * std::max(y1 - y0, 1e-12);
  Canvas c(title, s.tau.front(), s.tau.back(), y0 - pad, y1 + pad);
  c.polyline(s.tau, s.z, "#8a1c1c", 0.8);
  return c.str("theta", "z");
}

/// Gray level in [0, 255]: darker means larger; monotone in the value.
inline int gray_level(double v, double lo, double hi) {
  if (!(hi > lo)) return 200;
  double u = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  return 230 - static_cast<int>(std::floor(200.0 * u));
}

/// Heatmap: one row per loop, one column per knot slice s.
inline std::string schedule(const AreaSchedule& a, double c0, double c1, const std::string& title = "Area schedule") {
  Canvas c(title, 0.0, std::max(1, a.S), 0.0, std::max(1, a.loops));
  const double cw = (kWidth - 2.0 * kMargin) / std::max(1, a.S);
  const double ch = (kHeight - 2.0 * kMargin) / std::max(1, a.loops);
  for (int i = 0; i < a.loops; ++i) {
    for (int k = 0; k < a.S; ++k) {
      int g = gray_level(a.at(i, k), c0, c1);
      char fill[16];
      std::snprintf(fill, sizeof fill, "#%02x%02x%02x", g, g, g);
      c.add("<rect x=\"" + fixed(c.px(k)) + "\" y=\"" + fixed(c.py(i + 1)) + "\" width=\"" + fixed(cw) +
            "\" height=\"" + fixed(ch) + "\" fill=\"" + fill + "\"/>");
    }
  }
  return c.str("slice s", "loop i");
}

/// Chord-length tracks against t; at most max_tracks families, evenly spread
/// over the family index, and at most max_points samples per track.
inline std::string chords(const ChordTracking& tracking, const std::vector<double>& t,
                          std::size_t max_tracks = 48, std::size_t max_points = 200,
                          const std::string& title = "Reeb chord lengths") {
  double lmin = INFINITY, lmax = -INFINITY;
  for (const auto& f : tracking.families)
    for (double l : f.length) lmin = std::min(lmin, l), lmax = std::max(lmax, l);
  if (!std::isfinite(lmin)) lmin = 0.0, lmax = 1.0;
  Canvas c(title, t.empty() ? 0.0 : t.front(), t.empty() ? 1.0 : t.back(), lmin, lmax);
  const std::size_t n = tracking.families.size();
  const std::size_t shown = std::min(n, max_tracks);
  for (std::size_t q = 0; q < shown; ++q) {
    const auto& f = tracking.families[q * n / shown];
    const std::size_t len = f.length.size();
    const std::size_t stride = std::max<std::size_t>(1, (len + max_points - 1) / max_points);
    std::vector<double> x, y;
    for (std::size_t k = 0; k < len; k += stride) {
      x.push_back(t[f.birth + k]);
      y.push_back(f.length[k]);
    }
    if (len > 0 && (len - 1) % stride != 0) {
      x.push_back(t[f.birth + len - 1]);
      y.push_back(f.length.back());
    }
    c.polyline(x, y, "#2e7d32", 0.8);
  }
  return c.str("t", "chord length");
}

}  // namespace lagconc::svg
