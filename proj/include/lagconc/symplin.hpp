#pragma once

// Linear symplectic algebra in (R^4, w0) with w0(u,v) = u1 v3 - u3 v1 + u2 v4 - u4 v2.

#include <Eigen/Dense>
#include <cmath>

#include "lagconc/errors.hpp"

namespace lagconc {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Mat2 = Eigen::Matrix2d;
using Basis4x2 = Eigen::Matrix<double, 4, 2>;

inline const Mat4& omega_matrix() {
  static const Mat4 om = [] {
    Mat4 m = Mat4::Zero();
    m(0, 2) = 1;
    m(2, 0) = -1;
    m(1, 3) = 1;
    m(3, 1) = -1;
    return m;
  }();
  return om;
}

inline double omega0(const Vec4& u, const Vec4& v) { return u(0) * v(2) - u(2) * v(0) + u(1) * v(3) - u(3) * v(1); }

/// Max entry of |A^T Omega A - Omega|.
inline double symplectic_defect(const Mat4& a) {
  return (a.transpose() * omega_matrix() * a - omega_matrix()).cwiseAbs().maxCoeff();
}

/// Oriented two-plane with a stored ordered basis.
struct Plane4 {
  Basis4x2 basis;

  Plane4() : basis(Basis4x2::Zero()) {}
  explicit Plane4(const Basis4x2& b) : basis(b) { validate(); }
  Plane4(const Vec4& a, const Vec4& b) {
    basis.col(0) = a;
    basis.col(1) = b;
    validate();
  }

  Vec4 b(int i) const { return basis.col(i); }

  void validate() const {
    double g = (basis.transpose() * basis).determinant();
    if (!(g > 1e-12)) fail(ErrorKind::InvalidArgument, "plane basis is degenerate");
  }

  /// w0 evaluated on the basis, scaled by the basis norms.
  double isotropy() const { return std::abs(omega0(b(0), b(1))) / (b(0).norm() * b(1).norm()); }
  bool lagrangian(double tol = 1e-10) const { return isotropy() <= tol; }
};

/// |det[V|W]| divided by the product of basis norms; zero iff the planes meet.
inline double transversality(const Plane4& v, const Plane4& w) {
  Mat4 m;
  m << v.basis, w.basis;
  double scale = v.b(0).norm() * v.b(1).norm() * w.b(0).norm() * w.b(1).norm();
  return std::abs(m.determinant()) / scale;
}

inline constexpr double kTransverseTol = 1e-10;
inline constexpr double kEtaConditionMax = 1e8;

inline void require_transverse(const Plane4& v, const Plane4& w) {
  if (transversality(v, w) <= kTransverseTol) fail(ErrorKind::NotTransverse, "planes intersect nontrivially");
}

/// Matrix of the pairing (v_i, w_j) -> w0(v_i, w_j).
inline Mat2 pairing(const Basis4x2& v, const Basis4x2& w) { return v.transpose() * omega_matrix() * w; }

inline double condition_number(const Mat2& m) {
  Eigen::JacobiSVD<Mat2> svd(m);
  double lo = svd.singularValues()(1);
  return lo > 0 ? svd.singularValues()(0) / lo : INFINITY;
}

struct ComplementResult {
  Plane4 plane;
  double eta_condition = 0.0;
};

/// Lagrangian plane transverse to V obtained by correcting the first basis vector of W.
inline ComplementResult lagrangian_complement(const Plane4& v, const Plane4& w) {
  require_transverse(v, w);
  Mat2 eta = pairing(v.basis, w.basis);
  double cond = condition_number(eta);
  if (!(cond <= kEtaConditionMax)) fail(ErrorKind::EtaSingular, "pairing V -> W* is not invertible");
  // w* = w0(f1, .)|_W in the basis dual to (f1, f2)
  Eigen::Vector2d wstar(0.0, omega0(w.b(0), w.b(1)));
  Eigen::Vector2d c = eta.transpose().partialPivLu().solve(wstar);
  Vec4 correction = v.basis * c;
  ComplementResult r;
  r.plane = Plane4(Vec4(w.b(0) - correction), w.b(1));
  r.eta_condition = cond;
  return r;
}

/// Basis (f1, f2) of the Lagrangian plane W with w0(e_i, f_j) = delta_ij.
inline Basis4x2 dual_basis(const Plane4& v, const Plane4& w) {
  if (!w.lagrangian()) fail(ErrorKind::NotLagrangian, "W is not Lagrangian");
  require_transverse(v, w);
  Mat2 b = pairing(v.basis, w.basis);
  return w.basis * b.inverse();
}

/// The unique symplectic extension of phi: V0 -> V1 carrying W0 onto W1.
/// phi is given in the stored bases: phi(e0_k) = sum_j phi(j,k) e1_j.
inline Mat4 extend_symplectomorphism(const Plane4& v0, const Plane4& w0, const Plane4& v1, const Plane4& w1,
                                     const Mat2& phi) {
  Basis4x2 image = v1.basis * phi;
  double before = omega0(v0.b(0), v0.b(1));
  double after = omega0(image.col(0), image.col(1));
  double scale = std::max(1.0, std::abs(before));
  if (std::abs(before - after) > 1e-9 * scale)
    fail(ErrorKind::FormNotPreserved, "phi does not preserve the restricted form");
  if (std::abs(phi.determinant()) < 1e-14) fail(ErrorKind::InvalidArgument, "phi is not invertible");
  Plane4 image_plane(image);
  Basis4x2 f0 = dual_basis(v0, w0);
  Basis4x2 f1 = dual_basis(image_plane, w1);
  Mat4 src, dst;
  src << v0.basis, f0;
  dst << image, f1;
  return dst * src.inverse();
}

}  // namespace lagconc
