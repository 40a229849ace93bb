#pragma once

// Helpers shared by the unit tests: family builders and brute-force oracles
// that deliberately avoid the library's sweep-based intersection code.

#include <cmath>
#include <functional>
#include <vector>

#include "lagconc/geom.hpp"

namespace lagconc::testing {

inline SectionFamily flat_family(int M, int S, double t_minus = 0.0, double t_plus = 1.0) {
  Grid g{M, S, t_minus, t_plus};
  return SectionFamily(g);
}

inline SectionFamily family_from(int M, int S, double t_minus, double t_plus,
                                 const std::function<double(double s, double theta)>& f) {
  SectionFamily fam(Grid{M, S, t_minus, t_plus});
  for (int k = 0; k < S; ++k)
    for (int j = 0; j < M; ++j) fam.at(k, j) = f(fam.grid.s(k), fam.grid.theta(j));
  return fam;
}

/// Decorated family with explicit loops; sign pattern given per loop.
inline DecoratedCurveFamily decorate(SectionFamily base, const std::vector<int>& signs, int W,
                                     double area, double c1 = -1.0) {
  DecoratedCurveFamily d;
  d.base = std::move(base);
  const int n = static_cast<int>(signs.size());
  for (int i = 0; i < n; ++i) {
    LoopDecoration l;
    l.index = i;
    l.anchor = kTwoPi * i / n;
    l.sign = signs[i];
    l.winding = W;
    l.area.assign(d.base.grid.S, area);
    d.loops.push_back(l);
  }
  d.params.N = n / 2;
  d.params.W = W;
  d.params.c1 = c1 > 0 ? c1 : area;
  d.params.c0 = area;
  d.params.delta = W * d.params.c1;
  return d;
}

struct BruteCrossing {
  std::size_t a, b;
  double ta, tb;
};

/// O(n^2) enumeration of proper segment intersections of the closed polyline,
/// working on theta reduced mod 2 pi by testing every pair against shifts -2pi, 0, 2pi.
inline std::vector<BruteCrossing> brute_crossings(const ImmersedSlice& s) {
  std::vector<BruteCrossing> out;
  const std::size_t n = s.segments();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
        bool adjacent = (shift == 0.0 && j == i + 1) ||
                        (i == 0 && j == n - 1 && shift == kTwoPi) ||
                        (i == 0 && j == n - 1 && shift == -kTwoPi);
        if (adjacent) continue;
        double ax = s.tau[i], ay = s.p[i], bx = s.tau[i + 1], by = s.p[i + 1];
        double cx = s.tau[j] + shift, cy = s.p[j], dx = s.tau[j + 1] + shift, dy = s.p[j + 1];
        double rx = bx - ax, ry = by - ay, sx = dx - cx, sy = dy - cy;
        double den = rx * sy - ry * sx;
        if (den == 0.0) continue;
        double ta = ((cx - ax) * sy - (cy - ay) * sx) / den;
        double tb = ((cx - ax) * ry - (cy - ay) * rx) / den;
        if (ta >= 0 && ta < 1 && tb >= 0 && tb < 1) out.push_back({i, j, ta, tb});
      }
    }
  }
  return out;
}

/// z at a segment parameter by direct re-integration from the first vertex.
inline double brute_z(const ImmersedSlice& s, std::size_t k, double t, double base = 0.0) {
  double z = base;
  for (std::size_t m = 0; m < k; ++m) z += 0.5 * (s.p[m] + s.p[m + 1]) * (s.tau[m + 1] - s.tau[m]);
  double pt = s.p[k] + t * (s.p[k + 1] - s.p[k]);
  return z + 0.5 * (s.p[k] + pt) * t * (s.tau[k + 1] - s.tau[k]);
}

/// Signed crossing sum with over/under from brute_z.
inline int brute_writhe(const ImmersedSlice& s) {
  int w = 0;
  for (const auto& c : brute_crossings(s)) {
    double za = brute_z(s, c.a, c.ta), zb = brute_z(s, c.b, c.tb);
    double ax = s.tau[c.a + 1] - s.tau[c.a], ay = s.p[c.a + 1] - s.p[c.a];
    double bx = s.tau[c.b + 1] - s.tau[c.b], by = s.p[c.b + 1] - s.p[c.b];
    double cr = za > zb ? ax * by - ay * bx : bx * ay - by * ax;
    w += cr > 0 ? 1 : -1;
  }
  return w;
}

/// Turning number by counting signed passes of the tangent direction through angle 0.
inline int brute_turning(const ImmersedSlice& s) {
  const std::size_t n = s.segments();
  int count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t k1 = (k + 1) % n;
    double ux = s.tau[k + 1] - s.tau[k], uy = s.p[k + 1] - s.p[k];
    double vx = s.tau[k1 + 1] - s.tau[k1], vy = s.p[k1 + 1] - s.p[k1];
    // the tangent turns from u to v through the smaller angle
    double cr = ux * vy - uy * vx;
    if (cr > 0 && uy < 0 && vy >= 0) ++count;
    if (cr < 0 && uy >= 0 && vy < 0) --count;
  }
  return count;
}

}  // namespace lagconc::testing
