#pragma once

// Discretized immersed curves in the annulus T*S^1 = S^1_theta x R_p.
//
// A slice is an open polyline in the universal cover (tau, p) whose last vertex
// is the first one shifted by (2*pi, 0). The z-lift is the cumulative
// trapezoid integral of p dtau along the polyline, so the closing defect of
// the lift is exactly the discrete action.
//
// Orientation convention (used by every sign-sensitive routine): the base
// circle is traversed with increasing theta; a positive loop (sign +1) winds
// counterclockwise in the (theta, p) plane and lowers z by W * a.

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "lagconc/errors.hpp"

namespace lagconc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kAreaFloor = 1e-6;
inline constexpr double kIntersectionTol = 1e-9;
inline constexpr double kChordTol = 1e-9;

struct Grid {
  int M = 512;
  int S = 2;
  double t_minus = 0.0;
  double t_plus = 1.0;

  void validate() const {
    if (M < 16) fail(ErrorKind::InvalidArgument, "grid needs M >= 16");
    if (S < 2) fail(ErrorKind::InvalidArgument, "grid needs S >= 2");
    if (!(t_minus < t_plus)) fail(ErrorKind::InvalidArgument, "grid needs T_minus < T_plus");
  }
  double theta(int j) const { return kTwoPi * j / M; }
  double ds() const { return (t_plus - t_minus) / (S - 1); }
  double s(int k) const { return k == S - 1 ? t_plus : t_minus + ds() * k; }
};

/// A family of graphical curves p = p_s(theta), row-major S x M.
struct SectionFamily {
  Grid grid;
  std::vector<double> p;

  SectionFamily() = default;
  explicit SectionFamily(Grid g) : grid(g), p(static_cast<std::size_t>(g.S) * g.M, 0.0) {}

  std::span<const double> row(int k) const {
    return {p.data() + static_cast<std::size_t>(k) * grid.M, static_cast<std::size_t>(grid.M)};
  }
  std::span<double> row(int k) {
    return {p.data() + static_cast<std::size_t>(k) * grid.M, static_cast<std::size_t>(grid.M)};
  }
  double& at(int k, int j) { return p[static_cast<std::size_t>(k) * grid.M + j]; }
  double at(int k, int j) const { return p[static_cast<std::size_t>(k) * grid.M + j]; }
};

/// Periodic linear interpolation of a uniformly sampled function on S^1.
inline double interp_periodic(std::span<const double> row, double theta) {
  const auto m = static_cast<int>(row.size());
  double u = theta / kTwoPi * m;
  double fl = std::floor(u);
  double frac = u - fl;
  int j = static_cast<int>(((static_cast<long long>(fl) % m) + m) % m);
  int j1 = (j + 1) % m;
  return row[j] + frac * (row[j1] - row[j]);
}

struct LoopDecoration {
  int index = 0;
  double anchor = 0.0;
  int sign = +1;
  int winding = 1;
  std::vector<double> area;  // one entry per s-slice
};

struct FamilyParams {
  int N = 0;
  int W = 1;
  double c0 = 0.0;
  double c1 = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;  // always W * c1
};

struct DecoratedCurveFamily {
  SectionFamily base;
  std::vector<LoopDecoration> loops;
  FamilyParams params;
};

struct ImmersedSlice {
  std::vector<double> tau;
  std::vector<double> p;
  std::vector<double> z;  // empty until a lift is attached
  int orientation = +1;

  std::size_t segments() const { return tau.empty() ? 0 : tau.size() - 1; }
};

struct ReebChord {
  std::size_t seg_a = 0;  // earlier segment along the traversal
  double t_a = 0.0;
  std::size_t seg_b = 0;
  double t_b = 0.0;
  double theta = 0.0;  // base angle mod 2 pi
  double p = 0.0;
  double length = 0.0;
  bool a_is_upper = false;
};

// ---------------------------------------------------------------------------
// Loop shape
// ---------------------------------------------------------------------------

inline double loop_diameter(double area) { return 2.0 * std::sqrt(area / std::numbers::pi); }

/// Template of one W-fold coil: a prolate cycloid
///   x(u) = -h + 2 h u + r sin(2 pi W u),  g(u) = 1 - cos(2 pi W u),  u in [0, 1],
/// sampled at per_cover points per cover. The p-offset of the coil is sign * q * g.
/// Consecutive covers are translates of each other by 2h/W, which keeps every
/// self-intersection transverse.
struct CoilTemplate {
  int covers = 1;
  int per_cover = 32;
  double c1 = 0.0;
  double r = 0.0;
  double h = 0.0;
  double reach = 0.0;  // half-width of the theta-range the coil occupies, incl. margin
  std::vector<double> x;
  std::vector<double> g;
  double unit_integral = 0.0;  // trapezoid sum of g dx, negative

  static CoilTemplate make(double c1, int covers, int per_cover = 32) {
    if (covers < 1) fail(ErrorKind::InvalidArgument, "coil needs W >= 1");
    if (!(c1 > 0.0)) fail(ErrorKind::InvalidArgument, "coil needs c1 > 0");
    CoilTemplate t;
    t.covers = covers;
    t.per_cover = per_cover;
    t.c1 = c1;
    t.r = 1.1 * std::sqrt(c1 / std::numbers::pi);
    t.h = 0.05 * t.r;
    t.reach = t.r + 2.0 * t.h;
    const int n = covers * per_cover;
    t.x.resize(n + 1);
    t.g.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
      double u = static_cast<double>(k) / n;
      double ph = kTwoPi * covers * u;
      t.x[k] = -t.h + 2.0 * t.h * u + t.r * std::sin(ph);
      t.g[k] = 1.0 - std::cos(ph);
    }
    t.x[0] = -t.h;
    t.x[n] = t.h;
    t.g[0] = 0.0;
    t.g[n] = 0.0;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += 0.5 * (t.g[k] + t.g[k + 1]) * (t.x[k + 1] - t.x[k]);
    t.unit_integral = acc;
    return t;
  }

  /// Amplitude q making the coil change z by exactly -sign * W * area.
  double amplitude(double area) const { return covers * area / (-unit_integral); }
};

/// Vertex layout of a decorated slice. It depends only on the grid, the
/// anchors and the coil template, never on s or on the areas, so the
/// theta-projection of every realized slice of a family is identical.
class SliceLayout {
 public:
  struct Anchor {
    double theta;
    int sign;
  };

  /// Evenly spaced anchors; the base point sits halfway before the first one.
  SliceLayout(int M, std::vector<Anchor> anchors, CoilTemplate coil)
      : SliceLayout(M, anchors, coil, anchors.empty() ? 0.0 : -std::numbers::pi / static_cast<double>(anchors.size())) {}

  /// Anchors sorted by theta inside (tau0, tau0 + 2 pi), coils pairwise disjoint
  /// and clear of the base point.
  SliceLayout(int M, std::vector<Anchor> anchors, CoilTemplate coil, double tau0)
      : M_(M), anchors_(std::move(anchors)), coil_(std::move(coil)), tau0_(tau0) {
    double prev = tau0_ - coil_.reach;
    for (const Anchor& a : anchors_) {
      if (a.theta - prev <= 2.0 * coil_.reach)
        fail(ErrorKind::AnchorCollision, "loop diameter exceeds anchor spacing");
      prev = a.theta;
    }
    if (!anchors_.empty() && tau0_ + kTwoPi - anchors_.back().theta <= coil_.reach)
      fail(ErrorKind::AnchorCollision, "loop diameter exceeds anchor spacing");
    build();
  }

  int M() const { return M_; }
  double tau0() const { return tau0_; }
  const std::vector<Anchor>& anchors() const { return anchors_; }
  const CoilTemplate& coil() const { return coil_; }
  std::size_t vertex_count() const { return tau_.size(); }
  const std::vector<double>& tau() const { return tau_; }
  /// Index of the first coil vertex (at theta_i - h) and of the last one (theta_i + h).
  std::size_t loop_begin(int i) const { return loop_begin_[i]; }
  std::size_t loop_end(int i) const { return loop_begin_[i] + coil_.x.size() - 1; }

  /// Realize a slice from a base row and per-loop areas (any area >= 0; zero
  /// gives the undecorated skeleton with the same vertex layout).
  ImmersedSlice realize(std::span<const double> row, std::span<const double> areas) const {
    if (static_cast<int>(row.size()) != M_) fail(ErrorKind::InvalidArgument, "row size != M");
    if (areas.size() != anchors_.size()) fail(ErrorKind::InvalidArgument, "areas size != 2N");
    ImmersedSlice out;
    out.tau = tau_;
    out.p.resize(tau_.size());
    std::size_t v = 0;
    for (const Node& nd : nodes_) {
      switch (nd.kind) {
        case NodeKind::Interp:
          out.p[v++] = interp_periodic(row, nd.theta);
          break;
        case NodeKind::Sample:
          out.p[v++] = row[nd.index];
          break;
        case NodeKind::Coil: {
          const Anchor& a = anchors_[nd.index];
          double lo = interp_periodic(row, a.theta - coil_.reach);
          double hi = interp_periodic(row, a.theta + coil_.reach);
          double slope = (hi - lo) / (2.0 * coil_.reach);
          double mid = 0.5 * (lo + hi);
          double q = coil_.amplitude(areas[nd.index]);
          for (std::size_t k = 0; k < coil_.x.size(); ++k)
            out.p[v++] = mid + slope * coil_.x[k] + a.sign * q * coil_.g[k];
          break;
        }
      }
    }
    return out;
  }

 private:
  enum class NodeKind { Interp, Sample, Coil };
  struct Node {
    NodeKind kind;
    double theta;
    int index;
  };

  void build() {
    const double end = tau0_ + kTwoPi;
    const auto n_loops = static_cast<int>(anchors_.size());
    // samples mapped into [tau0, tau0 + 2 pi)
    std::vector<std::pair<double, int>> samples;
    for (int j = 0; j < M_; ++j) {
      double th = kTwoPi * j / M_;
      if (th < tau0_ - 1e-12) th += kTwoPi;
      if (th >= end - 1e-12) th -= kTwoPi;
      bool covered = false;
      for (const Anchor& a : anchors_)
        if (std::abs(th - a.theta) <= coil_.reach) covered = true;
      if (!covered && th > tau0_ + 1e-12) samples.emplace_back(th, j);
    }
    std::sort(samples.begin(), samples.end());

    nodes_.push_back({NodeKind::Interp, tau0_, -1});
    tau_.push_back(tau0_);
    loop_begin_.assign(n_loops, 0);
    std::size_t s = 0;
    for (int i = 0; i < n_loops; ++i) {
      const Anchor& a = anchors_[i];
      while (s < samples.size() && samples[s].first < a.theta - coil_.reach) {
        nodes_.push_back({NodeKind::Sample, samples[s].first, samples[s].second});
        tau_.push_back(samples[s].first);
        ++s;
      }
      nodes_.push_back({NodeKind::Interp, a.theta - coil_.reach, -1});
      tau_.push_back(a.theta - coil_.reach);
      nodes_.push_back({NodeKind::Coil, a.theta, i});
      loop_begin_[i] = tau_.size();
      for (double x : coil_.x) tau_.push_back(a.theta + x);
      nodes_.push_back({NodeKind::Interp, a.theta + coil_.reach, -1});
      tau_.push_back(a.theta + coil_.reach);
    }
    for (; s < samples.size(); ++s) {
      nodes_.push_back({NodeKind::Sample, samples[s].first, samples[s].second});
      tau_.push_back(samples[s].first);
    }
    nodes_.push_back({NodeKind::Interp, end, -1});
    tau_.push_back(end);
  }

  int M_;
  std::vector<Anchor> anchors_;
  CoilTemplate coil_;
  double tau0_ = 0.0;
  std::vector<Node> nodes_;
  std::vector<double> tau_;
  std::vector<std::size_t> loop_begin_;
};

inline SliceLayout layout_for(const DecoratedCurveFamily& family, int per_cover = 32) {
  std::vector<SliceLayout::Anchor> anchors;
  anchors.reserve(family.loops.size());
  for (const auto& l : family.loops) anchors.push_back({l.anchor, l.sign});
  double c1 = family.params.c1 > 0.0 ? family.params.c1 : kAreaFloor;
  return SliceLayout(family.base.grid.M, std::move(anchors),
                     CoilTemplate::make(c1, std::max(1, family.params.W), per_cover));
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Immersed polyline of slice s_index: the base row with a W-fold coil of
/// signed area sign * W * a_i(s) spliced in at every anchor.
inline ImmersedSlice materialize(const DecoratedCurveFamily& family, int s_index) {
  const Grid& g = family.base.grid;
  if (s_index < 0 || s_index >= g.S) fail(ErrorKind::InvalidArgument, "s_index out of range");
  std::vector<double> areas;
  areas.reserve(family.loops.size());
  for (const auto& l : family.loops) {
    double a = l.area.at(s_index);
    if (a < kAreaFloor) fail(ErrorKind::AreaTooSmall, "loop area below floor");
    areas.push_back(a);
  }
  SliceLayout layout = layout_for(family);
  return layout.realize(family.base.row(s_index), areas);
}

/// Closed-curve integral of p dtheta (trapezoid over segments).
inline double action(const ImmersedSlice& slice) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < slice.tau.size(); ++k)
    acc += 0.5 * (slice.p[k] + slice.p[k + 1]) * (slice.tau[k + 1] - slice.tau[k]);
  return acc;
}

struct ZLift {
  std::vector<double> z;
  double defect = 0.0;
};

/// Cumulative primitive of p dtheta starting from base_point_value; attaches z to the slice.
inline ZLift z_lift(ImmersedSlice& slice, double base_point_value) {
  ZLift out;
  out.z.resize(slice.tau.size());
  if (slice.tau.empty()) return out;
  out.z[0] = base_point_value;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < slice.tau.size(); ++k) {
    acc += 0.5 * (slice.p[k] + slice.p[k + 1]) * (slice.tau[k + 1] - slice.tau[k]);
    out.z[k + 1] = base_point_value + acc;
  }
  out.defect = acc;
  slice.z = out.z;
  return out;
}

namespace detail {

struct Seg {
  double x0, y0, x1, y1;
  std::size_t index;
  double shift;
  double xmin() const { return std::min(x0, x1); }
  double xmax() const { return std::max(x0, x1); }
};

struct Crossing {
  std::size_t a, b;  // a < b in traversal order (b may be a shifted copy)
  double ta, tb;
  double x, y;
  double shift_b;
};

/// z at parameter t of segment k, exact for p linear along the segment.
inline double z_at(const ImmersedSlice& s, std::size_t k, double t) {
  double dx = s.tau[k + 1] - s.tau[k];
  double pt = s.p[k] + t * (s.p[k + 1] - s.p[k]);
  return s.z[k] + 0.5 * dx * t * (s.p[k] + pt);
}

/// All transverse self-intersections via an x-sorted sweep with bounding-box rejection.
inline std::vector<Crossing> self_intersections(const ImmersedSlice& slice) {
  const std::size_t n = slice.segments();
  std::vector<Seg> segs;
  segs.reserve(n + 16);
  const double start = slice.tau.front();
  double max_x = start, min_x = start;
  for (std::size_t k = 0; k < n; ++k) {
    Seg s{slice.tau[k], slice.p[k], slice.tau[k + 1], slice.p[k + 1], k, 0.0};
    if (s.x0 == s.x1 && s.y0 == s.y1) fail(ErrorKind::DegenerateSegment, "zero-length segment");
    max_x = std::max(max_x, s.xmax());
    min_x = std::min(min_x, s.xmin());
    segs.push_back(s);
  }
  // periodic copies of segments that can overlap the other end of the cover
  const double end = start + kTwoPi;
  for (std::size_t k = 0; k < n; ++k) {
    if (segs[k].xmin() < start + (max_x - end) + 1e-12) {
      Seg c = segs[k];
      c.x0 += kTwoPi;
      c.x1 += kTwoPi;
      c.shift = kTwoPi;
      segs.push_back(c);
    }
  }
  (void)min_x;
  std::vector<std::size_t> order(segs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return segs[a].xmin() < segs[b].xmin(); });

  std::vector<Crossing> out;
  std::vector<std::size_t> active;
  for (std::size_t oi : order) {
    const Seg& cur = segs[oi];
    std::size_t w = 0;
    for (std::size_t r = 0; r < active.size(); ++r)
      if (segs[active[r]].xmax() >= cur.xmin()) active[w++] = active[r];
    active.resize(w);
    for (std::size_t ai : active) {
      const Seg& o = segs[ai];
      if (o.shift != 0.0 && cur.shift != 0.0) continue;
      const Seg* a = &o;
      const Seg* b = &cur;
      // order: unshifted first; among unshifted, lower index first
      if (a->shift != 0.0 || (b->shift == 0.0 && b->index < a->index)) std::swap(a, b);
      if (b->shift == 0.0) {
        if (b->index == a->index + 1) continue;
      } else {
        if (a->index == b->index) continue;
        if (a->index == n - 1 && b->index == 0) continue;  // shared closing vertex
      }
      if (std::max(a->y0, a->y1) < std::min(b->y0, b->y1) ||
          std::max(b->y0, b->y1) < std::min(a->y0, a->y1))
        continue;
      double rx = a->x1 - a->x0, ry = a->y1 - a->y0;
      double sx = b->x1 - b->x0, sy = b->y1 - b->y0;
      double den = rx * sy - ry * sx;
      double qx = b->x0 - a->x0, qy = b->y0 - a->y0;
      double la = std::hypot(rx, ry), lb = std::hypot(sx, sy);
      if (std::abs(den) <= 1e-14 * la * lb) {
        // parallel: collinear overlap is non-generic
        double cr = qx * ry - qy * rx;
        if (std::abs(cr) <= kIntersectionTol * la) {
          double t0 = (qx * rx + qy * ry) / (la * la);
          double t1 = t0 + (sx * rx + sy * ry) / (la * la);
          if (std::max(t0, t1) > 0.0 && std::min(t0, t1) < 1.0)
            fail(ErrorKind::NonGenericIntersection, "collinear overlapping segments");
        }
        continue;
      }
      double ta = (qx * sy - qy * sx) / den;
      double tb = (qx * ry - qy * rx) / den;
      if (ta < -1e-15 || ta > 1.0 + 1e-15 || tb < -1e-15 || tb > 1.0 + 1e-15) continue;
      double da = std::min(ta, 1.0 - ta) * la;
      double db = std::min(tb, 1.0 - tb) * lb;
      if (da < kIntersectionTol || db < kIntersectionTol)
        fail(ErrorKind::NonGenericIntersection, "intersection at a vertex");
      out.push_back({a->index, b->index, ta, tb, a->x0 + ta * rx, a->y0 + ta * ry, b->shift});
    }
    active.push_back(oi);
  }
  // triple points: two crossings at the same location
  std::vector<std::size_t> idx(out.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return out[a].x < out[b].x; });
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size() && out[idx[j]].x - out[idx[i]].x < kIntersectionTol; ++j)
      if (std::abs(out[idx[j]].y - out[idx[i]].y) < kIntersectionTol)
        fail(ErrorKind::NonGenericIntersection, "triple point");
  }
  return out;
}

inline void ensure_lift(const ImmersedSlice& slice) {
  if (slice.z.size() != slice.tau.size())
    fail(ErrorKind::InvalidArgument, "slice has no z-lift attached");
}

}  // namespace detail

/// Reeb chords = transverse double points of the Lagrangian projection, with
/// lengths read off the attached z-lift. Sorted by base angle, then length.
inline std::vector<ReebChord> reeb_chords(const ImmersedSlice& slice) {
  detail::ensure_lift(slice);
  auto xs = detail::self_intersections(slice);
  std::vector<ReebChord> out;
  out.reserve(xs.size());
  for (const auto& c : xs) {
    double za = detail::z_at(slice, c.a, c.ta);
    double zb = detail::z_at(slice, c.b, c.tb);
    double len = std::abs(za - zb);
    if (len <= kChordTol)
      fail(ErrorKind::NonGenericIntersection, "double point of the Legendrian lift (zero-length chord)");
    ReebChord ch;
    ch.seg_a = c.a;
    ch.t_a = c.ta;
    ch.seg_b = c.b;
    ch.t_b = c.tb;
    ch.theta = std::fmod(std::fmod(c.x, kTwoPi) + kTwoPi, kTwoPi);
    ch.p = c.y;
    ch.length = len;
    ch.a_is_upper = za > zb;
    out.push_back(ch);
  }
  std::sort(out.begin(), out.end(), [](const ReebChord& a, const ReebChord& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.length < b.length;
  });
  return out;
}

/// Turning number of the tangent of the closed polyline.
inline int rotation_number(const ImmersedSlice& slice) {
  const std::size_t n = slice.segments();
  if (n == 0) fail(ErrorKind::InvalidArgument, "empty slice");
  auto dir = [&](std::size_t k) {
    double dx = slice.tau[k + 1] - slice.tau[k], dy = slice.p[k + 1] - slice.p[k];
    if (dx == 0.0 && dy == 0.0) fail(ErrorKind::DegenerateSegment, "zero-length segment");
    return std::atan2(dy, dx);
  };
  double total = 0.0;
  double prev = dir(0);
  const double first = prev;
  for (std::size_t k = 1; k <= n; ++k) {
    double cur = k < n ? dir(k) : first;
    double d = cur - prev;
    while (d > std::numbers::pi) d -= kTwoPi;
    while (d < -std::numbers::pi) d += kTwoPi;
    total += d;
    prev = cur;
  }
  return static_cast<int>(std::lround(total / kTwoPi)) * slice.orientation;
}

/// Writhe of the Lagrangian-projection diagram, crossings resolved by z.
/// With the blackboard framing this is the Reeb-framed self-linking number,
/// normalized so the zero-section has value 0.
inline int self_linking_reeb(const ImmersedSlice& slice) {
  detail::ensure_lift(slice);
  auto xs = detail::self_intersections(slice);
  int writhe = 0;
  for (const auto& c : xs) {
    double za = detail::z_at(slice, c.a, c.ta);
    double zb = detail::z_at(slice, c.b, c.tb);
    if (std::abs(za - zb) <= kChordTol)
      fail(ErrorKind::NonGenericIntersection, "crossing without over/under data");
    double ax = slice.tau[c.a + 1] - slice.tau[c.a], ay = slice.p[c.a + 1] - slice.p[c.a];
    double bx = slice.tau[c.b + 1] - slice.tau[c.b], by = slice.p[c.b + 1] - slice.p[c.b];
    double cr = za > zb ? ax * by - ay * bx : bx * ay - by * ax;
    writhe += cr > 0 ? 1 : -1;
  }
  return writhe;
}

/// Upper bound on the Hausdorff distance in (theta, p) between a slice and the
/// graph of a base row, from vertical distances in both directions.
inline double hausdorff_to_section(const ImmersedSlice& slice, std::span<const double> row) {
  double d1 = 0.0;
  for (std::size_t k = 0; k < slice.tau.size(); ++k)
    d1 = std::max(d1, std::abs(slice.p[k] - interp_periodic(row, slice.tau[k])));
  // base -> slice: for every base sample find the closest slice point in the same fibre
  const auto m = static_cast<int>(row.size());
  const double start = slice.tau.front();
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k + 1 < slice.tau.size(); ++k) {
    double x0 = slice.tau[k], x1 = slice.tau[k + 1];
    double lo = std::min(x0, x1), hi = std::max(x0, x1);
    int j0 = static_cast<int>(std::ceil(lo / kTwoPi * m));
    int j1 = static_cast<int>(std::floor(hi / kTwoPi * m));
    for (int j = j0; j <= j1; ++j) {
      double th = kTwoPi * j / m;
      double t = x1 == x0 ? 0.0 : (th - x0) / (x1 - x0);
      double pv = slice.p[k] + t * (slice.p[k + 1] - slice.p[k]);
      int jj = ((j % m) + m) % m;
      best[jj] = std::min(best[jj], std::abs(pv - row[jj]));
    }
  }
  (void)start;
  double d2 = 0.0;
  for (double b : best) d2 = std::max(d2, b);
  return std::max(d1, d2);
}

}  // namespace lagconc
