#pragma once

// Cotangent/symplectisation coordinates, p_t flattening, and the trace
// cobordism of a Legendrian isotopy with its embeddedness certificate.
//
// Domain: T*(R x S^1) with coordinates (t, theta, p_t, p_theta) and form
// -d(p_t dt + p_theta dtheta). Codomain: R_t x J^1 S^1 with d(e^t (dz - p dtheta)).

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "lagconc/coil.hpp"
#include "lagconc/errors.hpp"
#include "lagconc/geom.hpp"

namespace lagconc {

struct CotangentPoint {
  double t = 0.0, theta = 0.0, p_t = 0.0, p_theta = 0.0;
};

struct JetPoint {
  double t = 0.0, theta = 0.0, p = 0.0, z = 0.0;
};

inline JetPoint psi_map(const CotangentPoint& c) {
  const double w = std::exp(-c.t);
  return {c.t, c.theta, w * c.p_theta, w * c.p_t};
}

inline CotangentPoint psi_inverse(const JetPoint& j) {
  const double w = std::exp(j.t);
  return {j.t, j.theta, w * j.z, w * j.p};
}

// ---------------------------------------------------------------------------
// pullback check

struct PullbackDefect {
  double max_abs = 0.0;   // max over cells of |d(psi^* beta) + d(lambda)| / cell area
  double max_form = 0.0;  // max over cells of |d(lambda)| / cell area, for scale
};

namespace detail {

inline constexpr std::array<double, 4> kGaussX{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                               0.8611363115940526};
inline constexpr std::array<double, 4> kGaussW{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                               0.3478548451374538};

// Line integral of a one-form along the straight (u,v) edge a -> b, using a
// fourth-order central difference for the tangent of the pulled-back curve.
template <class Pt, class Form>
double edge_integral(const std::function<Pt(double, double)>& map, double ua, double va, double ub, double vb,
                     Form form) {
  const double h = 1e-4;
  double sum = 0.0;
  for (std::size_t g = 0; g < 4; ++g) {
    double s = 0.5 * (1.0 + kGaussX[g]);
    auto at = [&](double x) { return map(ua + x * (ub - ua), va + x * (vb - va)); };
    Pt m2 = at(s - 2 * h), m1 = at(s - h), p1 = at(s + h), p2 = at(s + 2 * h);
    Pt c = at(s);
    sum += 0.5 * kGaussW[g] * form(c, m2, m1, p1, p2, h);
  }
  return sum;
}

inline double d4(double m2, double m1, double p1, double p2, double h) {
  return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
}

}  // namespace detail

/// Compares d(Psi^* e^t(dz - p dtheta)) with -d(p_t dt + p_theta dtheta) on an
/// n x n grid of cells over [0,1]^2, for a surface given in cotangent coordinates.
/// The jet-side form is evaluated on Psi o surface without using the closed form of Psi^*.
inline PullbackDefect pullback_defect(const std::function<CotangentPoint(double, double)>& surface, int n = 64) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "pullback grid needs n >= 1");
  std::function<JetPoint(double, double)> jet = [&](double u, double v) { return psi_map(surface(u, v)); };
  auto lambda = [](const CotangentPoint& c, const CotangentPoint& m2, const CotangentPoint& m1,
                   const CotangentPoint& p1, const CotangentPoint& p2, double h) {
    return c.p_t * detail::d4(m2.t, m1.t, p1.t, p2.t, h) + c.p_theta * detail::d4(m2.theta, m1.theta, p1.theta, p2.theta, h);
  };
  auto beta = [](const JetPoint& c, const JetPoint& m2, const JetPoint& m1, const JetPoint& p1, const JetPoint& p2,
                 double h) {
    return std::exp(c.t) * (detail::d4(m2.z, m1.z, p1.z, p2.z, h) - c.p * detail::d4(m2.theta, m1.theta, p1.theta, p2.theta, h));
  };
  const double du = 1.0 / n;
  PullbackDefect out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double u0 = i * du, u1 = (i + 1) * du, v0 = j * du, v1 = (j + 1) * du;
      std::array<std::array<double, 4>, 4> e{{{u0, v0, u1, v0}, {u1, v0, u1, v1}, {u1, v1, u0, v1}, {u0, v1, u0, v0}}};
      double cl = 0.0, cb = 0.0;
      for (const auto& ed : e) {
        cl += detail::edge_integral<CotangentPoint>(surface, ed[0], ed[1], ed[2], ed[3], lambda);
        cb += detail::edge_integral<JetPoint>(jet, ed[0], ed[1], ed[2], ed[3], beta);
      }
      const double area = du * du;
      out.max_abs = std::max(out.max_abs, std::abs(cb + cl) / area);
      out.max_form = std::max(out.max_form, std::abs(cl) / area);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// flattening

/// A section of T*([T_-, T_+] x S^1): rows are t-slices, columns theta samples.
struct BisectionSurface {
  Grid grid;
  std::vector<double> pt, ptheta;  // S x M each

  BisectionSurface() = default;
  explicit BisectionSurface(Grid g)
      : grid(g), pt(static_cast<std::size_t>(g.S) * g.M, 0.0), ptheta(static_cast<std::size_t>(g.S) * g.M, 0.0) {}

  std::size_t idx(int k, int j) const { return static_cast<std::size_t>(k) * grid.M + j; }
  double& p_t(int k, int j) { return pt[idx(k, j)]; }
  double p_t(int k, int j) const { return pt[idx(k, j)]; }
  double& p_theta(int k, int j) { return ptheta[idx(k, j)]; }
  double p_theta(int k, int j) const { return ptheta[idx(k, j)]; }

  SectionFamily theta_family() const {
    SectionFamily f(grid);
    f.p = ptheta;
    return f;
  }
};

/// Unit-integral bump on [0, 1]: the quadratic B-spline with knots 0, 1/3, 2/3, 1
/// (a smoothed triangle). Its maximum is 9/4.
inline double chi_hat(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  double x = 3.0 * u;
  if (x < 1.0) return 3.0 * 0.5 * x * x;
  if (x < 2.0) return 3.0 * (0.75 - (x - 1.5) * (x - 1.5));
  return 3.0 * 0.5 * (3.0 - x) * (3.0 - x);
}
inline constexpr double kChiHatMax = 2.25;
inline constexpr double kExtensionBudget = 0.05;

struct FlattenResult {
  BisectionSurface surface;  // on [T_-, T'_+], p_t == 0
  std::vector<double> h;     // S' x M primitive of the extended p_t
  std::vector<double> chi;   // extension weights at rows S-1 .. S'-1
  int extension_rows = 0;
  double correction_amplitude = 0.0;  // max |chi * h(T_+, .)|
};

inline void require_cylindrical_rows(const BisectionSurface& s, double tol = kBoundaryDefectTol) {
  const int M = s.grid.M, S = s.grid.S;
  for (int k : {0, S - 1})
    for (int j = 0; j < M; ++j)
      if (std::abs(s.p_t(k, j)) > tol || std::abs(s.p_theta(k, j)) > tol)
        fail(ErrorKind::BoundaryNotCylindrical, "surface is not the zero-section at a t-boundary");
}

/// Periodic fourth-order theta-derivative of one row.
inline std::vector<double> d_theta(std::span<const double> row) {
  const auto M = static_cast<int>(row.size());
  const double h = kTwoPi / M;
  std::vector<double> d(M);
  for (int j = 0; j < M; ++j) {
    auto at = [&](int q) { return row[((j + q) % M + M) % M]; };
    d[j] = (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
  }
  return d;
}

/// Append [T_+, T'_+] carrying p_t = -chi(t) h(T_+, theta), then add -dh fibrewise.
inline FlattenResult flatten_pt(const BisectionSurface& in, double T_plus_prime, double budget = kExtensionBudget) {
  in.grid.validate();
  if (in.pt.size() != static_cast<std::size_t>(in.grid.S) * in.grid.M || in.ptheta.size() != in.pt.size())
    fail(ErrorKind::InvalidArgument, "surface data does not match its grid");
  require_cylindrical_rows(in);
  const int M = in.grid.M, S = in.grid.S;
  const double dt = in.grid.ds();
  const double T_plus = in.grid.t_plus;
  if (!(T_plus_prime > T_plus)) fail(ErrorKind::InsufficientExtension, "T'_+ must exceed T_+");
  // a multiple of 6 rows puts the spline knots and the peak on nodes, so the
  // trapezoid integral of the sampled bump is exact
  const int n_ext = 6 * static_cast<int>(std::lround((T_plus_prime - T_plus) / (6.0 * dt)));
  if (n_ext < 6) fail(ErrorKind::InsufficientExtension, "extension shorter than six t-steps");

  FlattenResult out;
  out.extension_rows = n_ext;
  Grid g = in.grid;
  g.S = S + n_ext;
  g.t_plus = in.grid.t_minus + dt * (g.S - 1);
  BisectionSurface ext(g);
  std::copy(in.pt.begin(), in.pt.end(), ext.pt.begin());
  std::copy(in.ptheta.begin(), in.ptheta.end(), ext.ptheta.begin());

  // h on the original range by cumulative trapezoid
  std::vector<double> h(static_cast<std::size_t>(g.S) * M, 0.0);
  for (int k = 1; k < S; ++k)
    for (int j = 0; j < M; ++j)
      h[ext.idx(k, j)] = h[ext.idx(k - 1, j)] + 0.5 * dt * (ext.p_t(k - 1, j) + ext.p_t(k, j));

  // chi sampled on the extension nodes and normalised to unit trapezoid integral
  out.chi.resize(n_ext + 1);
  double integral = 0.0;
  for (int i = 0; i <= n_ext; ++i) {
    out.chi[i] = chi_hat(static_cast<double>(i) / n_ext);
    integral += (i == 0 || i == n_ext ? 0.5 : 1.0) * dt * out.chi[i];
  }
  for (double& c : out.chi) c /= integral;

  double hmax = 0.0;
  for (int j = 0; j < M; ++j) hmax = std::max(hmax, std::abs(h[ext.idx(S - 1, j)]));
  out.correction_amplitude = hmax * *std::max_element(out.chi.begin(), out.chi.end());
  if (out.correction_amplitude > budget)
    fail(ErrorKind::InsufficientExtension, "correction amplitude " + std::to_string(out.correction_amplitude) +
                                               " exceeds budget; lengthen the extension");

  for (int i = 1; i <= n_ext; ++i) {
    const int k = S - 1 + i;
    for (int j = 0; j < M; ++j) {
      ext.p_t(k, j) = -out.chi[i] * h[ext.idx(S - 1, j)];
      h[ext.idx(k, j)] = h[ext.idx(k - 1, j)] + 0.5 * dt * (ext.p_t(k - 1, j) + ext.p_t(k, j));
    }
  }

  // fibre-wise addition of -dh: the t-part cancels p_t identically, the theta-part shifts p_theta
  BisectionSurface flat(g);
  for (int k = 0; k < g.S; ++k) {
    std::span<const double> hrow(h.data() + static_cast<std::size_t>(k) * M, static_cast<std::size_t>(M));
    auto dh = d_theta(hrow);
    for (int j = 0; j < M; ++j) flat.p_theta(k, j) = ext.p_theta(k, j) - dh[j];
  }
  out.surface = std::move(flat);
  out.h = std::move(h);
  return out;
}

// ---------------------------------------------------------------------------
// trace cobordism

struct CobordismSlice {
  std::vector<double> tau, p_theta, z, p_t;
};

struct Violation {
  std::string kind;  // "chord-decrease" or "double-point"
  std::size_t slice = 0;
  double t = 0.0, theta = 0.0, p = 0.0;
  double amount = 0.0;
};

struct Certificate {
  bool embedded = false;
  bool checked = false;
  std::size_t families = 0, tracking_gaps = 0, crossings_checked = 0;
  double min_chord_step = INFINITY;
  double min_pt_separation = INFINITY;
  std::vector<Violation> violations;
};

struct TraceCobordism {
  std::shared_ptr<const LegendrianIsotopy> isotopy;
  std::vector<double> t;
  std::vector<std::vector<ReebChord>> chords;
  double sup_weighted_pt = 0.0;  // sup |e^{-t} p_t|
  double sup_raw_pt = 0.0;       // sup |p_t|
  double sup_z_plus_dz = 0.0;    // sup |z| + |forward difference of z|
  Certificate certificate;

  std::size_t size() const { return t.size(); }

  /// p_t = d/dt (e^t z) = e^t (z + dz/dt), with dz/dt by centred differences
  /// (second-order one-sided at the ends).
  CobordismSlice slice(std::size_t k) const {
    const std::size_t S = t.size();
    auto at = [&](std::size_t i) { return isotopy->realize(i); };
    ImmersedSlice c = at(k);
    CobordismSlice out{c.tau, c.p, c.z, std::vector<double>(c.z.size(), 0.0)};
    std::vector<double> dz(c.z.size(), 0.0);
    if (S == 2) {
      ImmersedSlice o = at(1 - k);
      const double dt = t[1] - t[0];
      for (std::size_t j = 0; j < dz.size(); ++j) dz[j] = (k == 0 ? o.z[j] - c.z[j] : c.z[j] - o.z[j]) / dt;
    } else if (S > 2) {
      const double dt = t[1] - t[0];
      if (k == 0 || k + 1 == S) {
        const std::size_t k1 = k == 0 ? 1 : S - 2, k2 = k == 0 ? 2 : S - 3;
        ImmersedSlice a = at(k1), b = at(k2);
        const double sgn = k == 0 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < dz.size(); ++j) dz[j] = sgn * (-3.0 * c.z[j] + 4.0 * a.z[j] - b.z[j]) / (2.0 * dt);
      } else {
        ImmersedSlice lo = at(k - 1), hi = at(k + 1);
        for (std::size_t j = 0; j < dz.size(); ++j) dz[j] = (hi.z[j] - lo.z[j]) / (2.0 * dt);
      }
    }
    const double e = std::exp(t[k]);
    for (std::size_t j = 0; j < dz.size(); ++j) out.p_t[j] = e * (c.z[j] + dz[j]);
    return out;
  }
};

inline void require_uniform(const std::vector<double>& t) {
  if (t.size() < 2) return;
  const double dt = t[1] - t[0];
  if (!(dt > 0.0)) fail(ErrorKind::NonUniformSampling, "isotopy t-grid is not increasing");
  for (std::size_t k = 1; k < t.size(); ++k)
    if (std::abs((t[k] - t[k - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      fail(ErrorKind::NonUniformSampling, "isotopy slices are not on a uniform t-grid");
}

inline TraceCobordism trace_cobordism(std::shared_ptr<const LegendrianIsotopy> iso) {
  if (!iso) fail(ErrorKind::InvalidArgument, "null isotopy");
  TraceCobordism cob;
  cob.isotopy = iso;
  for (const auto& s : iso->slices) cob.t.push_back(s.t);
  require_uniform(cob.t);
  const std::size_t S = cob.t.size();
  cob.chords.resize(S);
  std::vector<double> zprev;
  for (std::size_t k = 0; k < S; ++k) {
    CobordismSlice s = cob.slice(k);
    ImmersedSlice im{s.tau, s.p_theta, s.z, +1};
    if (std::abs(action(im)) > 1e-9) fail(ErrorKind::InvalidArgument, "isotopy slice is not exact");
    cob.chords[k] = reeb_chords(im);
    const double w = std::exp(-cob.t[k]);
    for (double v : s.p_t) {
      cob.sup_weighted_pt = std::max(cob.sup_weighted_pt, std::abs(w * v));
      cob.sup_raw_pt = std::max(cob.sup_raw_pt, std::abs(v));
    }
    if (k > 0) {
      const double dt = cob.t[k] - cob.t[k - 1];
      for (std::size_t j = 0; j < s.z.size(); ++j)
        cob.sup_z_plus_dz = std::max(cob.sup_z_plus_dz, std::abs(zprev[j]) + std::abs((s.z[j] - zprev[j]) / dt));
    }
    zprev = std::move(s.z);
  }
  return cob;
}

inline TraceCobordism trace_cobordism(const LegendrianIsotopy& iso) {
  return trace_cobordism(std::make_shared<const LegendrianIsotopy>(iso));
}

// ---------------------------------------------------------------------------
// certificate

namespace detail {

struct HashedCrossing {
  std::size_t seg_lo, seg_hi;  // seg_lo < seg_hi
  double t_lo, t_hi;           // parameters along each segment
  double x, y;                 // (theta, p_theta), theta in the polyline's own cover
};

// Transverse crossings of one closed polyline via uniform grid hashing on (theta, p).
inline std::vector<HashedCrossing> hashed_crossings(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size() - 1;
  struct S {
    double x0, y0, x1, y1;
    std::size_t index;
    double shift;
  };
  std::vector<S> segs;
  const double start = x.front(), end = start + kTwoPi;
  double ymin = INFINITY, ymax = -INFINITY, total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    S s{x[k], y[k], x[k + 1], y[k + 1], k, 0.0};
    segs.push_back(s);
    ymin = std::min({ymin, s.y0, s.y1});
    ymax = std::max({ymax, s.y0, s.y1});
    total += std::hypot(s.x1 - s.x0, s.y1 - s.y0);
    for (double sh : {-kTwoPi, kTwoPi}) {
      double lo = std::min(s.x0, s.x1) + sh, hi = std::max(s.x0, s.x1) + sh;
      if (hi >= start && lo <= end) segs.push_back({s.x0 + sh, s.y0, s.x1 + sh, s.y1, k, sh});
    }
  }
  const double cell = std::max(2.0 * total / static_cast<double>(n), 1e-12);
  auto key = [](long long a, long long b) { return (a * 73856093LL) ^ (b * 19349663LL); };
  std::unordered_map<long long, std::vector<std::size_t>> grid;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const S& s = segs[i];
    long long cx0 = static_cast<long long>(std::floor(std::min(s.x0, s.x1) / cell));
    long long cx1 = static_cast<long long>(std::floor(std::max(s.x0, s.x1) / cell));
    long long cy0 = static_cast<long long>(std::floor((std::min(s.y0, s.y1) - ymin) / cell));
    long long cy1 = static_cast<long long>(std::floor((std::max(s.y0, s.y1) - ymin) / cell));
    for (long long a = cx0; a <= cx1; ++a)
      for (long long b = cy0; b <= cy1; ++b) grid[key(a, b)].push_back(i);
  }
  std::vector<HashedCrossing> out;
  std::vector<std::array<std::size_t, 2>> seen;
  for (auto& [k, ids] : grid) {
    for (std::size_t u = 0; u < ids.size(); ++u) {
      for (std::size_t v = u + 1; v < ids.size(); ++v) {
        const S* a = &segs[ids[u]];
        const S* b = &segs[ids[v]];
        if (a->shift != 0.0 && b->shift != 0.0) continue;
        if (a->shift != 0.0) std::swap(a, b);
        std::size_t lo = std::min(a->index, b->index), hi = std::max(a->index, b->index);
        if (hi - lo <= 1 || (lo == 0 && hi == n - 1)) continue;
        double rx = a->x1 - a->x0, ry = a->y1 - a->y0, sx = b->x1 - b->x0, sy = b->y1 - b->y0;
        double den = rx * sy - ry * sx;
        if (den == 0.0) continue;
        double qx = b->x0 - a->x0, qy = b->y0 - a->y0;
        double ta = (qx * sy - qy * sx) / den, tb = (qx * ry - qy * rx) / den;
        if (ta < 0.0 || ta >= 1.0 || tb < 0.0 || tb >= 1.0) continue;
        double cxp = a->x0 + ta * rx;
        if (cxp < start || cxp >= end) continue;
        out.push_back({lo, hi, a->index == lo ? ta : tb, a->index == lo ? tb : ta, cxp, a->y0 + ta * ry});
      }
    }
  }
  // a crossing registered from several cells is reported once
  std::sort(out.begin(), out.end(), [](const HashedCrossing& p, const HashedCrossing& q) {
    return std::tie(p.seg_lo, p.seg_hi) < std::tie(q.seg_lo, q.seg_hi);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const HashedCrossing& p, const HashedCrossing& q) {
                          return p.seg_lo == q.seg_lo && p.seg_hi == q.seg_hi;
                        }),
            out.end());
  (void)ymax;
  return out;
}

inline double lerp_at(const std::vector<double>& v, std::size_t seg, double t) {
  return v[seg] + t * (v[seg + 1] - v[seg]);
}

}  // namespace detail

/// (a) tracked chord lengths never decrease beyond -slack; (b) a direct search over
/// the crossings of every t-slice finds no point where the two branches also share p_t.
/// Equality of p_t between sampled slices is detected by a sign change of the
/// branch difference along the same crossing.
inline Certificate certify_embedded(TraceCobordism& cob, double slack = 1e-9, double tol = 1e-9) {
  Certificate cert;
  cert.checked = true;
  ChordTracking tr = track_chords(cob.chords);
  cert.families = tr.families.size();
  cert.tracking_gaps = tr.gaps;
  cert.min_chord_step = tr.min_step;
  for (const ChordFamily& f : tr.families) {
    for (std::size_t i = 1; i < f.length.size(); ++i) {
      double step = f.length[i] - f.length[i - 1];
      if (step < -slack) {
        std::size_t k = f.birth + i;
        cert.violations.push_back({"chord-decrease", k, cob.t[k], f.theta[i], f.p[i], step});
      }
    }
  }

  std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> prev;
  for (std::size_t k = 0; k < cob.size(); ++k) {
    CobordismSlice s = cob.slice(k);
    auto xs = detail::hashed_crossings(s.tau, s.p_theta);
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> now;
    now.reserve(xs.size());
    for (const auto& c : xs) {
      double d = detail::lerp_at(s.p_t, c.seg_lo, c.t_lo) - detail::lerp_at(s.p_t, c.seg_hi, c.t_hi);
      ++cert.crossings_checked;
      cert.min_pt_separation = std::min(cert.min_pt_separation, std::abs(d));
      bool hit = std::abs(d) <= tol;
      auto key = std::make_pair(c.seg_lo, c.seg_hi);
      auto it = std::lower_bound(prev.begin(), prev.end(), std::make_pair(key, -std::numeric_limits<double>::infinity()));
      if (!hit && it != prev.end() && it->first == key && (it->second > 0) != (d > 0)) hit = true;
      if (hit) cert.violations.push_back({"double-point", k, cob.t[k], c.x, c.y, d});
      now.push_back({key, d});
    }
    std::sort(now.begin(), now.end());
    prev = std::move(now);
  }
  cert.embedded = cert.violations.empty();
  cob.certificate = cert;
  return cert;
}

}  // namespace lagconc
