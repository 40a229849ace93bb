#pragma once

// Zig-zag Legendrian approximation of a section {z = 0, p = -f(theta)} of J^1 S^1.
// Each zig-zag is realized as a once-covered coil in the Lagrangian projection;
// away from the coil windows the Legendrian follows the target exactly.

#include <algorithm>
#include <cmath>
#include <vector>

#include "lagconc/errors.hpp"
#include "lagconc/geom.hpp"

namespace lagconc {

struct TransverseProfile {
  std::vector<double> f;
  double epsilon_band = 0.0;

  int M() const { return static_cast<int>(f.size()); }
  double target_p(int j) const { return -f[j]; }
};

struct ZigzagOptions {
  double tol_p = -1.0;    // negative: 0.05 max|f|
  int window_cells = 4;   // theta-window of one zig-zag, in grid cells
};

struct Zigzag {
  double theta;
  int sign;
  double area;
  bool padding;
  std::size_t cusp_a, cusp_b;
};

struct FrontCurve {
  double epsilon = 0.0;
  std::vector<double> theta, p, z;
  std::vector<std::size_t> cusps;  // vertices where d theta changes sign
  std::vector<Zigzag> zigzags;

  std::size_t size() const { return theta.size(); }

  /// Maximal vertex ranges between consecutive cusps.
  std::vector<std::pair<std::size_t, std::size_t>> arcs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t start = 0;
    for (std::size_t c : cusps) {
      out.emplace_back(start, c);
      start = c;
    }
    out.emplace_back(start, theta.empty() ? 0 : theta.size() - 1);
    return out;
  }
};

struct ZigzagResult {
  FrontCurve front;
  int k_plus = 0;
  int k_minus = 0;
  double sup_abs_z = 0.0;
  double p_error = 0.0;  // sup |p + f| outside the zig-zag windows
  double tol_p = 0.0;
};

namespace detail {

/// Extreme values of z on the polyline, including interior extrema where p changes sign.
inline double sup_abs_z(const ImmersedSlice& s) {
  double m = 0.0;
  for (std::size_t k = 0; k < s.tau.size(); ++k) m = std::max(m, std::abs(s.z[k]));
  for (std::size_t k = 0; k + 1 < s.tau.size(); ++k) {
    if ((s.p[k] > 0) != (s.p[k + 1] > 0)) {
      double t = s.p[k] / (s.p[k] - s.p[k + 1]);
      m = std::max(m, std::abs(z_at(s, k, t)));
    }
  }
  return m;
}

inline std::vector<std::size_t> front_cusps(const std::vector<double>& theta) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k + 1 < theta.size(); ++k) {
    double a = theta[k] - theta[k - 1], b = theta[k + 1] - theta[k];
    if ((a > 0) != (b > 0)) out.push_back(k);
  }
  return out;
}

/// Padding anchors: evenly spaced over the connected run of the given sign
/// containing the largest |p|, or over the whole circle when no such run exists.
inline std::vector<int> padding_slots(const std::vector<double>& p, int sign, int count, int lo, int hi) {
  std::vector<int> out;
  if (count <= 0) return out;
  const int M = static_cast<int>(p.size());
  int best = -1;
  for (int j = lo; j <= hi; ++j)
    if (sign * p[j] > 0 && (best < 0 || sign * p[j] > sign * p[best])) best = j;
  int a = lo, b = hi;
  if (best >= 0) {
    a = best;
    b = best;
    while (a > lo && sign * p[a - 1] > 0) --a;
    while (b < hi && sign * p[b + 1] > 0) ++b;
  }
  for (int i = 0; i < count; ++i) {
    int j = a + static_cast<int>(std::lround((b - a) * (i + 0.5) / count));
    out.push_back(std::clamp(j, 0, M - 1));
  }
  return out;
}

}  // namespace detail

inline ZigzagResult zigzag_approximate(const TransverseProfile& target, int k_plus_min, int k_minus_min,
                                       ZigzagOptions opt = {}) {
  const int M = target.M();
  const double eps = target.epsilon_band;
  if (M < 16) fail(ErrorKind::InvalidArgument, "profile needs M >= 16");
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon_band must be positive");
  if (k_plus_min < 0 || k_minus_min < 0) fail(ErrorKind::InvalidArgument, "negative stabilisation minimum");
  double fmax = 0.0;
  for (double v : target.f) {
    if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "profile is not finite");
    fmax = std::max(fmax, std::abs(v));
  }
  const double tol_p = opt.tol_p >= 0 ? opt.tol_p : 0.05 * fmax;
  const int win = std::max(2, opt.window_cells);
  const double dth = kTwoPi / M;

  std::vector<double> p(M);
  for (int j = 0; j < M; ++j) p[j] = target.target_p(j);

  // anchors live on grid points clear of the base point theta = 0
  const int lo = win / 2 + 1, hi = M - win / 2 - 1;
  std::vector<int> owner(M, -1);
  struct Plan {
    int j;
    int sign;
    double area;
    bool padding;
  };
  std::vector<Plan> plan;
  auto free_slot = [&](int j) {
    for (int d = -(win - 1); d <= win - 1; ++d) {
      int k = j + d;
      if (k >= 0 && k < M && owner[k] >= 0) return false;
    }
    return true;
  };
  auto claim = [&](int j, int sign, double area, bool pad) {
    owner[j] = static_cast<int>(plan.size());
    plan.push_back({j, sign, area, pad});
  };

  const double tooth = 2.0 * eps / 3.0;
  const double threshold = eps / 3.0;

  // greedy sweep on the trapezoid primitive of the target
  auto run_greedy = [&](const std::vector<Plan>& pads) {
    plan.clear();
    std::fill(owner.begin(), owner.end(), -1);
    for (const Plan& pd : pads) {
      if (!free_slot(pd.j)) fail(ErrorKind::BandTooNarrow, "padding zig-zags do not fit at this resolution");
      claim(pd.j, pd.sign, pd.area, true);
    }
    double z = 0.0;
    for (int j = 1; j < M; ++j) {
      z += 0.5 * (p[j - 1] + p[j]) * dth;
      if (owner[j] >= 0) {
        z -= plan[owner[j]].sign * plan[owner[j]].area;
        continue;
      }
      if (j < lo || j > hi) continue;
      int want = 0;
      if (z >= threshold && p[j] > 0) want = +1;
      if (z <= -threshold && p[j] < 0) want = -1;
      if (want != 0 && free_slot(j)) {
        claim(j, want, tooth, false);
        z -= want * tooth;
      }
    }
    z += 0.5 * (p[M - 1] + p[0]) * dth;
    return z;
  };

  std::vector<Plan> pads;
  double residual = run_greedy(pads);
  int kp = 0, km = 0;
  for (const Plan& pl : plan) (pl.sign > 0 ? kp : km)++;
  const double pad_area = std::max(1e-5, std::min(tooth, eps) / (4.0 * (std::max(k_plus_min, k_minus_min) + 1)));
  if (kp < k_plus_min || km < k_minus_min) {
    for (int j : detail::padding_slots(p, +1, std::max(0, k_plus_min - kp), lo, hi)) pads.push_back({j, +1, pad_area, true});
    for (int j : detail::padding_slots(p, -1, std::max(0, k_minus_min - km), lo, hi)) pads.push_back({j, -1, pad_area, true});
    residual = run_greedy(pads);
  }

  // residual fix: a closing loop must lower z by `residual`
  auto close_with = [&](double r) {
    if (std::abs(r) <= 1e-10) return;
    int want = r > 0 ? +1 : -1;
    for (auto it = plan.rbegin(); it != plan.rend(); ++it) {
      if (it->sign == want) {
        it->area += std::abs(r);
        return;
      }
    }
    for (auto it = plan.rbegin(); it != plan.rend(); ++it) {
      if (it->sign == -want && it->area - std::abs(r) >= kAreaFloor) {
        it->area -= std::abs(r);
        return;
      }
    }
    int best = -1;
    for (int j = lo; j <= hi; ++j)
      if (free_slot(j) && (best < 0 || want * p[j] > want * p[best])) best = j;
    if (best < 0) fail(ErrorKind::BandTooNarrow, "no room for the closing zig-zag");
    claim(best, want, std::abs(r), false);
  };
  close_with(residual);

  if (static_cast<int>(plan.size()) * win > M)
    fail(ErrorKind::BandTooNarrow, "required zig-zag density exceeds the resolution");

  std::sort(plan.begin(), plan.end(), [](const Plan& a, const Plan& b) { return a.j < b.j; });
  std::vector<SliceLayout::Anchor> anchors;
  std::vector<double> areas;
  for (const Plan& pl : plan) {
    anchors.push_back({pl.j * dth, pl.sign});
    areas.push_back(pl.area);
  }
  const double reach_target = 0.5 * win * dth * 0.95;
  // reach = 1.1 r (1 + 0.1), so c1 = pi (reach / 1.21)^2
  const double c1 = std::numbers::pi * std::pow(reach_target / 1.21, 2);
  SliceLayout layout(M, anchors, CoilTemplate::make(c1, 1), 0.0);

  // exact closure on the realized polyline
  ImmersedSlice slice = layout.realize(p, areas);
  double defect = z_lift(slice, 0.0).defect;
  if (std::abs(defect) > 1e-10) {
    for (std::size_t i = 0; i < plan.size(); ++i) {
      if (plan[i].sign * defect > 0) {
        areas[i] += std::abs(defect);
        plan[i].area = areas[i];
        break;
      }
    }
    slice = layout.realize(p, areas);
    z_lift(slice, 0.0);
  }

  ZigzagResult res;
  res.tol_p = tol_p;
  res.sup_abs_z = detail::sup_abs_z(slice);
  if (res.sup_abs_z > eps) fail(ErrorKind::BandTooNarrow, "front leaves the |z| <= epsilon band");

  // p error outside the windows, on the sample vertices
  std::vector<char> in_window(slice.tau.size(), 0);
  for (std::size_t i = 0; i < plan.size(); ++i)
    for (std::size_t k = layout.loop_begin(static_cast<int>(i)) - 1; k <= layout.loop_end(static_cast<int>(i)) + 1; ++k)
      in_window[k] = 1;
  for (std::size_t k = 0; k < slice.tau.size(); ++k) {
    if (in_window[k]) continue;
    res.p_error = std::max(res.p_error, std::abs(slice.p[k] - interp_periodic(p, slice.tau[k])));
  }
  if (res.p_error > tol_p + 1e-12) fail(ErrorKind::BandTooNarrow, "p tolerance not met at this resolution");

  FrontCurve& fr = res.front;
  fr.epsilon = eps;
  fr.theta = slice.tau;
  fr.p = slice.p;
  fr.z = slice.z;
  fr.cusps = detail::front_cusps(fr.theta);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    Zigzag zz{anchors[i].theta, plan[i].sign, areas[i], plan[i].padding, 0, 0};
    std::size_t b = layout.loop_begin(static_cast<int>(i)), e = layout.loop_end(static_cast<int>(i));
    std::vector<std::size_t> inside;
    for (std::size_t c : fr.cusps)
      if (c >= b && c <= e) inside.push_back(c);
    if (inside.size() != 2) fail(ErrorKind::CuspResolutionFailure, "zig-zag does not have exactly two cusps");
    zz.cusp_a = inside[0];
    zz.cusp_b = inside[1];
    fr.zigzags.push_back(zz);
    (zz.sign > 0 ? res.k_plus : res.k_minus)++;
  }
  return res;
}

/// Lagrangian projection of the front; z is the front height.
inline ImmersedSlice front_to_slice(const FrontCurve& front) {
  if (front.theta.size() < 3 || front.p.size() != front.theta.size() || front.z.size() != front.theta.size())
    fail(ErrorKind::InvalidArgument, "front samples are inconsistent");
  ImmersedSlice s;
  s.tau = front.theta;
  s.p = front.p;
  s.z = front.z;
  try {
    (void)detail::self_intersections(s);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateSegment || e.kind() == ErrorKind::NonGenericIntersection)
      fail(ErrorKind::CuspResolutionFailure, e.what());
    throw;
  }
  return s;
}

}  // namespace lagconc
