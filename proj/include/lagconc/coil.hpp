#pragma once

// Loop pairs on a family of sections, monotone area scheduling and the
// interpolated Legendrian isotopy.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lagconc/errors.hpp"
#include "lagconc/geom.hpp"

namespace lagconc {

/// Jump in z across loop i: a positive loop lowers z by W a, a negative one raises it.
inline double loop_jump(int sign, int W, double area) { return -sign * W * area; }

inline int loop_sign(int i) { return i % 2 == 0 ? +1 : -1; }

/// Cumulative primitive of p d(theta) along each slice.
struct ZField {
  int S = 0;
  double ds = 0.0;
  std::vector<double> tau;  // increasing, spanning one period from tau.front()
  std::vector<double> z0;   // S x tau.size(), z0 = 0 at tau.front()
  std::vector<double> c;    // z0 at tau.front() + 2 pi

  std::size_t width() const { return tau.size(); }
  double at(int k, std::size_t j) const { return z0[static_cast<std::size_t>(k) * tau.size() + j]; }
  double& at(int k, std::size_t j) { return z0[static_cast<std::size_t>(k) * tau.size() + j]; }
  double origin() const { return tau.front(); }

  /// Periodically extended z0(tau, s): z0(tau + 2 pi) = z0(tau) + c.
  double eval(int k, double t) const {
    double shift = 0.0;
    while (t < origin()) {
      t += kTwoPi;
      shift -= c[k];
    }
    while (t > origin() + kTwoPi) {
      t -= kTwoPi;
      shift += c[k];
    }
    auto it = std::upper_bound(tau.begin(), tau.end(), t);
    std::size_t j = it == tau.begin() ? 0 : static_cast<std::size_t>(it - tau.begin()) - 1;
    if (j + 1 >= tau.size()) return at(k, tau.size() - 1) + shift;
    double w = (t - tau[j]) / (tau[j + 1] - tau[j]);
    return shift + (1.0 - w) * at(k, j) + w * at(k, j + 1);
  }
};

inline constexpr double kBoundaryDefectTol = 1e-12;

inline void require_cylindrical_ends(const ZField& zf) {
  if (std::abs(zf.c.front()) > kBoundaryDefectTol || std::abs(zf.c.back()) > kBoundaryDefectTol)
    fail(ErrorKind::BoundaryNotCylindrical, "exactness defect does not vanish at the boundary slices");
}

/// z0 of the bare family by the trapezoid rule on its own grid.
inline ZField compute_zfield(const SectionFamily& base) {
  base.grid.validate();
  const int M = base.grid.M, S = base.grid.S;
  ZField zf;
  zf.S = S;
  zf.ds = base.grid.ds();
  zf.tau.resize(M + 1);
  for (int j = 0; j <= M; ++j) zf.tau[j] = kTwoPi * j / M;
  zf.z0.assign(static_cast<std::size_t>(S) * (M + 1), 0.0);
  zf.c.assign(S, 0.0);
  const double h = kTwoPi / M;
  for (int k = 0; k < S; ++k) {
    auto row = base.row(k);
    double acc = 0.0;
    for (int j = 1; j <= M; ++j) {
      acc += 0.5 * (row[j - 1] + row[j % M]) * h;
      zf.at(k, j) = acc;
    }
    zf.c[k] = acc;
  }
  require_cylindrical_ends(zf);
  return zf;
}

/// z0 of the undecorated skeleton (all areas zero) on the vertex layout of the decorated slices.
inline ZField compute_zfield(const DecoratedCurveFamily& family, const SliceLayout& layout) {
  const int S = family.base.grid.S;
  ZField zf;
  zf.S = S;
  zf.ds = family.base.grid.ds();
  zf.tau = layout.tau();
  zf.z0.assign(static_cast<std::size_t>(S) * zf.tau.size(), 0.0);
  zf.c.assign(S, 0.0);
  std::vector<double> zeros(layout.anchors().size(), 0.0);
  for (int k = 0; k < S; ++k) {
    ImmersedSlice sk = layout.realize(family.base.row(k), zeros);
    auto lift = z_lift(sk, 0.0);
    for (std::size_t j = 0; j < zf.tau.size(); ++j) zf.at(k, j) = lift.z[j];
    zf.c[k] = lift.defect;
  }
  require_cylindrical_ends(zf);
  return zf;
}

/// 2N alternating loops of area c0 at theta = 2 pi i / 2N.
inline DecoratedCurveFamily insert_loop_pairs(const SectionFamily& base, int N, int W, double c0, double c1) {
  base.grid.validate();
  if (N < 0 || W < 1) fail(ErrorKind::InvalidArgument, "need N >= 0 and W >= 1");
  DecoratedCurveFamily d;
  d.base = base;
  d.params.N = N;
  d.params.W = W;
  d.params.c0 = c0;
  d.params.c1 = c1;
  d.params.delta = W * c1;
  if (N == 0) return d;
  if (!(c0 >= kAreaFloor) || !(c1 >= c0)) fail(ErrorKind::InvalidArgument, "need kAreaFloor <= c0 <= c1");
  for (double v : base.row(0))
    if (v != 0.0) fail(ErrorKind::BoundaryNotCylindrical, "first slice is not the zero-section");
  for (int i = 0; i < 2 * N; ++i) {
    LoopDecoration l;
    l.index = i;
    l.anchor = kTwoPi * i / (2 * N);
    l.sign = loop_sign(i);
    l.winding = W;
    l.area.assign(base.grid.S, c0);
    d.loops.push_back(std::move(l));
  }
  (void)layout_for(d);  // AnchorCollision when the loops do not fit
  return d;
}

struct ParameterChoice {
  int N = 0;
  int W = 0;
  double c1 = 0.0;
  double c0 = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  // audit trail
  double max_tv = 0.0;
  double max_abs_c = 0.0;
  double max_abs_z0 = 0.0;
  double max_dtau_z0 = 0.0;
  double steps = 0.0;  // (max_tv + max_abs_c) / delta
};

inline int next_pow2(double x) {
  int n = 1;
  while (n < x) n *= 2;
  return n;
}

/// Largest c1 whose loop diameter 2 sqrt(c1/pi) stays below pi/(2N), with a 1% margin.
inline double c1_limit(int N) { return 0.99 * std::numbers::pi * std::pow(std::numbers::pi / (4.0 * N), 2); }

inline ParameterChoice auto_parameters(const ZField& zf, double epsilon) {
  if (!(epsilon > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be positive");
  ParameterChoice pc;
  pc.epsilon = epsilon;
  pc.delta = epsilon / 4.0;
  for (int k = 0; k < zf.S; ++k) {
    double tv = 0.0;
    for (std::size_t j = 0; j < zf.width(); ++j) {
      pc.max_abs_z0 = std::max(pc.max_abs_z0, std::abs(zf.at(k, j)));
      if (j > 0) {
        double d = zf.at(k, j) - zf.at(k, j - 1);
        tv += std::abs(d);
        double h = zf.tau[j] - zf.tau[j - 1];
        if (h > 0) pc.max_dtau_z0 = std::max(pc.max_dtau_z0, std::abs(d) / h);
      }
    }
    pc.max_tv = std::max(pc.max_tv, tv);
    pc.max_abs_c = std::max(pc.max_abs_c, std::abs(zf.c[k]));
  }
  pc.steps = (pc.max_tv + pc.max_abs_c) / pc.delta;
  double need = std::ceil(pc.steps);
  pc.N = need <= 0 ? 2 : 4 * next_pow2(need);
  double limit = c1_limit(pc.N);
  pc.W = static_cast<int>(std::ceil(pc.delta / limit));
  pc.c1 = pc.delta / pc.W;
  pc.c0 = pc.c1 / 4.0;
  return pc;
}

/// Areas a_i(s), row-major (2N) x S.
struct AreaSchedule {
  int loops = 0;
  int S = 0;
  std::vector<double> a;

  double at(int i, int k) const { return a[static_cast<std::size_t>(i) * S + k]; }
  double& at(int i, int k) { return a[static_cast<std::size_t>(i) * S + k]; }
  std::vector<double> column(int k) const {
    std::vector<double> out(loops);
    for (int i = 0; i < loops; ++i) out[i] = at(i, k);
    return out;
  }
  /// min over i, s of a_i(s+1) - a_i(s).
  double min_increment() const {
    double m = INFINITY;
    for (int i = 0; i < loops; ++i)
      for (int k = 0; k + 1 < S; ++k) m = std::min(m, at(i, k + 1) - at(i, k));
    return m;
  }
};

struct SchedulerReport {
  int N = 0, W = 0;
  double c0 = 0.0, c1 = 0.0, delta = 0.0, epsilon = 0.0;
  double z_base = 0.0;
  double sup_abs_z = 0.0;
  double sup_z_plus_dz = 0.0;  // sup over (tau, s) of |z| + |forward difference in s|
  double max_defect = 0.0;
  std::vector<double> defects;
  bool feasible = false;
  std::string reason;
};

struct ScheduleResult {
  AreaSchedule schedule;
  SchedulerReport report;
};

namespace detail {

/// Anchor positions and the matching segment ranges [theta_i, theta_{i+1}].
inline std::vector<double> anchor_thetas(int N) {
  std::vector<double> th(2 * N + 1);
  for (int i = 0; i <= 2 * N; ++i) th[i] = kTwoPi * i / (2 * N);
  return th;
}

/// min/max of z0(., s) over [lo, hi] using the field samples plus the endpoints.
inline std::pair<double, double> range_on(const ZField& zf, int k, double lo, double hi) {
  double a = zf.eval(k, lo), b = zf.eval(k, hi);
  double mn = std::min(a, b), mx = std::max(a, b);
  for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
    auto first = std::upper_bound(zf.tau.begin(), zf.tau.end(), lo - shift);
    for (auto it = first; it != zf.tau.end() && *it + shift < hi; ++it) {
      double v = zf.eval(k, *it + shift);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
  }
  return {mn, mx};
}

}  // namespace detail

/// Areas never shrink, every slice exact, z steered toward 0.
inline ScheduleResult schedule_areas(const ZField& zf, int N, int W, double c1, double epsilon,
                                     double c0 = -1.0) {
  if (N < 1 || W < 1 || !(c1 > 0) || !(epsilon > 0)) fail(ErrorKind::InvalidArgument, "bad scheduler parameters");
  require_cylindrical_ends(zf);
  if (c0 < 0) c0 = c1 / 4.0;
  const int L = 2 * N, S = zf.S;
  ScheduleResult res;
  AreaSchedule& sch = res.schedule;
  sch.loops = L;
  sch.S = S;
  sch.a.assign(static_cast<std::size_t>(L) * S, c0);
  SchedulerReport& rep = res.report;
  rep.N = N;
  rep.W = W;
  rep.c0 = c0;
  rep.c1 = c1;
  rep.delta = W * c1;
  rep.epsilon = epsilon;
  rep.z_base = 0.5 * W * c0;
  rep.defects.assign(S, 0.0);
  rep.feasible = true;
  const double b = rep.z_base;
  const auto th = detail::anchor_thetas(N);

  std::vector<double> prev(L, c0), cur(L);
  std::vector<double> mids(L);
  for (int k = 0; k < S; ++k) {
    const double c = zf.c[k];
    for (int i = 0; i < L; ++i) {
      auto [mn, mx] = detail::range_on(zf, k, th[i], th[i + 1]);
      mids[i] = 0.5 * (mn + mx);
    }
    double K = 0.0;
    for (int i = 0; i < L; ++i) {
      const int sg = loop_sign(i);
      double target = -b - mids[i];
      if (i == L - 2) {
        // leave the last (negative) loop able to close the curve
        target = std::min(target, -c - W * prev[L - 1]);
        target = std::max(target, -c - W * c1);
      }
      if (i == L - 1) target = -c;
      double want = (K - target) / (sg * W);
      cur[i] = std::clamp(want, prev[i], c1);
      K += loop_jump(sg, W, cur[i]);
    }
    // residual: K must equal -c
    double R = K + c;
    if (R != 0.0) {
      const int sg = R > 0 ? +1 : -1;
      for (int i = L - 1; i >= 0 && std::abs(R) > 0.0; --i) {
        if (loop_sign(i) != sg) continue;
        double room = (c1 - cur[i]) * W;
        double take = std::min(room, std::abs(R));
        cur[i] += take / W;
        R -= sg * take;
      }
    }
    double defect = c;
    for (int i = 0; i < L; ++i) defect += loop_jump(loop_sign(i), W, cur[i]);
    rep.defects[k] = defect;
    rep.max_defect = std::max(rep.max_defect, std::abs(defect));
    if (std::abs(defect) > 1e-9 && rep.feasible) {
      rep.feasible = false;
      rep.reason = "loop capacity c1 exhausted while closing slice " + std::to_string(k);
    }
    for (int i = 0; i < L; ++i) sch.at(i, k) = cur[i];
    prev = cur;
  }

  // post-hoc bounds on the step model z = b + z0 + K(tau)
  std::vector<double> zprev, znow;
  for (int k = 0; k < S; ++k) {
    znow.assign(zf.width(), 0.0);
    double K = 0.0;
    int next = 0;
    for (std::size_t j = 0; j < zf.width(); ++j) {
      double t = zf.tau[j];
      while (next < L && th[next] < t) {
        K += loop_jump(loop_sign(next), W, sch.at(next, k));
        ++next;
      }
      znow[j] = b + zf.at(k, j) + K;
      rep.sup_abs_z = std::max(rep.sup_abs_z, std::abs(znow[j]));
    }
    if (k > 0) {
      for (std::size_t j = 0; j < zf.width(); ++j) {
        double d = std::abs(znow[j] - zprev[j]) / zf.ds;
        rep.sup_z_plus_dz = std::max(rep.sup_z_plus_dz, std::abs(zprev[j]) + d);
      }
    }
    zprev.swap(znow);
  }
  if (rep.feasible && rep.sup_abs_z > epsilon) {
    rep.feasible = false;
    rep.reason = "sup|z| exceeds epsilon";
  }
  if (rep.feasible && rep.sup_z_plus_dz > 3.0 * epsilon) {
    rep.feasible = false;
    rep.reason = "sup(|z| + |dz/ds|) exceeds 3 epsilon";
  }
  return res;
}

/// Throwing wrapper: Infeasible carries the suggested escalation.
inline ScheduleResult schedule_or_throw(const ZField& zf, int N, int W, double c1, double epsilon, double c0 = -1.0) {
  auto r = schedule_areas(zf, N, W, c1, epsilon, c0);
  if (!r.report.feasible)
    fail(ErrorKind::Infeasible, "N=" + std::to_string(N) + " W=" + std::to_string(W) + " c1=" + std::to_string(c1) +
                                    ": " + r.report.reason + "; try N=" + std::to_string(2 * N));
  return r;
}

/// Realizable Legendrian isotopy: one (t, base row, areas) triple per output slice,
/// all sharing one vertex layout.
struct IsotopySlice {
  double t = 0.0;
  std::vector<double> row;
  std::vector<double> areas;
  double z_shift = 0.0;  // added to z_base for this slice only
};

struct LegendrianIsotopy {
  SliceLayout layout;
  double z_base = 0.0;
  std::vector<IsotopySlice> slices;

  explicit LegendrianIsotopy(SliceLayout l) : layout(std::move(l)) {}

  std::size_t size() const { return slices.size(); }
  double dt() const { return slices.size() < 2 ? 0.0 : slices[1].t - slices[0].t; }

  ImmersedSlice realize(std::size_t i) const {
    ImmersedSlice s = layout.realize(slices[i].row, slices[i].areas);
    z_lift(s, z_base + slices[i].z_shift);
    return s;
  }
};

/// Window radius of the moving average applied to the knot slices.
inline int mollifier_window(int S) { return std::max(2, S / 50); }

/// Mollify the knot data, then interpolate linearly onto M_interp uniform slices.
/// window < 0 picks mollifier_window(S); window = 0 disables mollification.
inline LegendrianIsotopy interpolate_smooth(const DecoratedCurveFamily& family, const AreaSchedule& schedule,
                                            int M_interp, double z_base, int window = -1, int per_cover = 32) {
  const int S = family.base.grid.S;
  const int L = static_cast<int>(family.loops.size());
  if (schedule.S != S || schedule.loops != L) fail(ErrorKind::InvalidArgument, "schedule does not match family");
  if (M_interp < 1) fail(ErrorKind::InvalidArgument, "M_interp must be positive");
  LegendrianIsotopy iso(layout_for(family, per_cover));
  iso.z_base = z_base;
  const int M = family.base.grid.M;
  if (window < 0) window = mollifier_window(S);
  const int r = window / 2;

  std::vector<std::vector<double>> rows(S, std::vector<double>(M)), areas(S, std::vector<double>(L));
  for (int k = 0; k < S; ++k) {
    // shrinking symmetric window keeps the ends fixed and monotone data monotone
    int rk = std::min({r, k, S - 1 - k});
    double inv = 1.0 / (2 * rk + 1);
    for (int q = k - rk; q <= k + rk; ++q) {
      auto src = family.base.row(q);
      for (int j = 0; j < M; ++j) rows[k][j] += src[j] * inv;
      for (int i = 0; i < L; ++i) areas[k][i] += schedule.at(i, q) * inv;
    }
  }

  // averaging and interpolation round; a monotone schedule row stays exactly monotone
  std::vector<bool> monotone(L, true);
  for (int i = 0; i < L; ++i)
    for (int k = 0; k + 1 < S; ++k)
      if (schedule.at(i, k + 1) < schedule.at(i, k)) monotone[i] = false;
  for (int k = 1; k < S; ++k)
    for (int i = 0; i < L; ++i)
      if (monotone[i]) areas[k][i] = std::max(areas[k][i], areas[k - 1][i]);

  const double t0 = family.base.grid.t_minus, t1 = family.base.grid.t_plus;
  iso.slices.resize(M_interp);
  for (int m = 0; m < M_interp; ++m) {
    IsotopySlice& out = iso.slices[m];
    double u = M_interp == 1 ? 0.0 : static_cast<double>(m) / (M_interp - 1);
    out.t = t0 + u * (t1 - t0);
    double x = u * (S - 1);
    int j = std::min(static_cast<int>(std::floor(x)), std::max(0, S - 2));
    double w = S == 1 ? 0.0 : x - j;
    if (S == 1) j = 0;
    int j1 = std::min(j + 1, S - 1);
    out.row.resize(M);
    out.areas.resize(L);
    for (int q = 0; q < M; ++q) out.row[q] = (1.0 - w) * rows[j][q] + w * rows[j1][q];
    for (int i = 0; i < L; ++i) {
      out.areas[i] = (1.0 - w) * areas[j][i] + w * areas[j1][i];
      if (monotone[i] && m > 0) out.areas[i] = std::max(out.areas[i], iso.slices[m - 1].areas[i]);
    }
  }
  return iso;
}

/// Every realized slice must share the same theta-projection.
inline void check_projection(const std::vector<ImmersedSlice>& slices, double tol = 1e-12) {
  for (std::size_t k = 1; k < slices.size(); ++k) {
    if (slices[k].tau.size() != slices[0].tau.size()) fail(ErrorKind::ProjectionMismatch, "vertex counts differ");
    for (std::size_t j = 0; j < slices[0].tau.size(); ++j)
      if (std::abs(slices[k].tau[j] - slices[0].tau[j]) > tol)
        fail(ErrorKind::ProjectionMismatch, "theta-projection differs at slice " + std::to_string(k));
  }
}

/// Chord families followed across slices.
struct ChordFamily {
  std::size_t birth = 0;  // first slice index
  std::vector<double> length;
  std::vector<double> theta, p;
  bool by_index = true;  // false when nearest-neighbour matching was needed
};

struct ChordTracking {
  std::vector<ChordFamily> families;
  std::size_t births = 0, deaths = 0, gaps = 0;
  double min_step = INFINITY;  // min over families of length(k+1) - length(k)
};

/// Follow chords by their segment pair; fall back to nearest neighbour in (theta, p, length)
/// within 3x the observed drift of already-matched chords.
inline ChordTracking track_chords(const std::vector<std::vector<ReebChord>>& per_slice) {
  ChordTracking out;
  std::vector<int> live;  // family index per chord of the previous slice
  for (std::size_t k = 0; k < per_slice.size(); ++k) {
    const auto& cur = per_slice[k];
    std::vector<int> now(cur.size(), -1);
    if (k > 0) {
      const auto& prev = per_slice[k - 1];
      std::vector<char> used(prev.size(), 0);
      double drift = 0.0;
      // exact identity by segment indices (both lists are sorted by theta, so use a map)
      std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> keys;
      keys.reserve(prev.size());
      for (std::size_t q = 0; q < prev.size(); ++q) keys.push_back({{prev[q].seg_a, prev[q].seg_b}, q});
      std::sort(keys.begin(), keys.end());
      for (std::size_t c = 0; c < cur.size(); ++c) {
        auto key = std::make_pair(cur[c].seg_a, cur[c].seg_b);
        auto it = std::lower_bound(keys.begin(), keys.end(), std::make_pair(key, std::size_t{0}));
        if (it != keys.end() && it->first == key && !used[it->second]) {
          used[it->second] = 1;
          now[c] = live[it->second];
          const auto& pv = prev[it->second];
          drift = std::max(drift, std::hypot(cur[c].theta - pv.theta, cur[c].p - pv.p, cur[c].length - pv.length));
        }
      }
      double gate = 3.0 * std::max(drift, 1e-12);
      for (std::size_t c = 0; c < cur.size(); ++c) {
        if (now[c] >= 0) continue;
        double best = INFINITY;
        std::size_t arg = 0;
        for (std::size_t q = 0; q < prev.size(); ++q) {
          if (used[q]) continue;
          double d = std::hypot(cur[c].theta - prev[q].theta, cur[c].p - prev[q].p, cur[c].length - prev[q].length);
          if (d < best) {
            best = d;
            arg = q;
          }
        }
        if (best <= gate) {
          used[arg] = 1;
          now[c] = live[arg];
          out.families[now[c]].by_index = false;
        } else if (best < INFINITY) {
          ++out.gaps;
        }
      }
      for (std::size_t q = 0; q < prev.size(); ++q)
        if (!used[q]) ++out.deaths;
    }
    for (std::size_t c = 0; c < cur.size(); ++c) {
      if (now[c] < 0) {
        now[c] = static_cast<int>(out.families.size());
        ChordFamily f;
        f.birth = k;
        out.families.push_back(f);
        if (k > 0) ++out.births;
      }
      ChordFamily& f = out.families[now[c]];
      if (!f.length.empty()) out.min_step = std::min(out.min_step, cur[c].length - f.length.back());
      f.length.push_back(cur[c].length);
      f.theta.push_back(cur[c].theta);
      f.p.push_back(cur[c].p);
    }
    live = std::move(now);
  }
  return out;
}

}  // namespace lagconc
