#include <gtest/gtest.h>

#include <random>

#include "lagconc/symplin.hpp"
#include "symplin_support.hpp"

using namespace lagconc;
using namespace lagconc::testing;


TEST(Omega, MatrixMatchesBlockForm) {
  Rng r(1);
  for (int k = 0; k < 20; ++k) {
    Vec4 u = r.vec(), v = r.vec();
    double by_hand = u(0) * v(2) - u(2) * v(0) + u(1) * v(3) - u(3) * v(1);
    EXPECT_NEAR(u.dot(omega_matrix() * v), by_hand, 1e-15);
    EXPECT_NEAR(omega0(u, v), by_hand, 1e-15);
  }
  EXPECT_EQ(omega0(unit(0), unit(2)), 1.0);
  EXPECT_EQ(omega0(unit(1), unit(3)), 1.0);
  EXPECT_EQ(omega0(unit(0), unit(1)), 0.0);
}

TEST(Plane4, RejectsDegenerateBasis) {
  EXPECT_THROW(Plane4(unit(0), 2 * unit(0)), Error);
  EXPECT_NO_THROW(Plane4(unit(0), unit(1)));
}

TEST(LagrangianComplement, StandardPairIsUnchanged) {
  Plane4 v(unit(0), unit(1)), w(unit(2), unit(3));
  auto res = lagrangian_complement(v, w);
  EXPECT_EQ(res.plane.basis, w.basis);
  EXPECT_NEAR(res.eta_condition, 1.0, 1e-15);
}

TEST(LagrangianComplement, RandomTamePairs) {
  Rng r(2024);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Mat4 s = random_symplectic(r);
    Mat4 j = s * standard_j() * s.inverse();
    Plane4 v = random_plane(r);
    Plane4 w = map(j, v);
    auto p = lagrangian_complement(v, w).plane;
    bool ok = std::abs(omega0(p.b(0), p.b(1))) <= 1e-10 && transversality(v, p) > 1e-8;
    if (!ok) ++failures;
  }
  EXPECT_EQ(failures, 0);
}

TEST(LagrangianComplement, ContinuousInInputs) {
  Rng r(99);
  for (int trial = 0; trial < 100; ++trial) {
    Plane4 v = random_plane(r);
    Plane4 w = map(standard_j(), v);
    Basis4x2 dv, dw;
    for (int c = 0; c < 2; ++c) {
      dv.col(c) = r.vec();
      dw.col(c) = r.vec();
    }
    Basis4x2 base = lagrangian_complement(v, w).plane.basis;
    Plane4 v2(Basis4x2(v.basis + 1e-6 * dv)), w2(Basis4x2(w.basis + 1e-6 * dw));
    Basis4x2 moved = lagrangian_complement(v2, w2).plane.basis;
    EXPECT_LE((moved - base).norm(), 1e-4);
  }
}

TEST(LagrangianComplement, Errors) {
  Plane4 v(unit(0), unit(1));
  try {
    lagrangian_complement(v, Plane4(unit(0), unit(2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotTransverse);
  }
  // transverse but w0(v, .)|_W degenerate: V = <e1, e3>, W = <e2, e4> pair to zero against e1 and e3
  try {
    lagrangian_complement(Plane4(unit(0), unit(2)), Plane4(unit(1), unit(3)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EtaSingular);
  }
}

TEST(DualBasis, StandardAndRescaled) {
  Plane4 v(unit(0), unit(1)), w(unit(2), unit(3));
  Basis4x2 f = dual_basis(v, w);
  EXPECT_EQ(Vec4(f.col(0)), unit(2));
  EXPECT_EQ(Vec4(f.col(1)), unit(3));
  Basis4x2 g = dual_basis(Plane4(Vec4(2 * unit(0)), unit(1)), w);
  EXPECT_EQ(Vec4(g.col(0)), Vec4(0.5 * unit(2)));
  EXPECT_EQ(Vec4(g.col(1)), unit(3));
}

TEST(DualBasis, RandomLagrangianPairingIsIdentity) {
  Rng r(5);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Plane4 v = random_plane(r), w = random_lagrangian(r);
    if (transversality(v, w) < 1e-6) continue;
    Basis4x2 f = dual_basis(v, w);
    Mat2 pm = pairing(v.basis, f);
    if ((pm - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-10) ++failures;
    // same plane, different stored basis
    Basis4x2 f2 = dual_basis(v, Plane4(Basis4x2(w.basis * (Mat2::Identity() + 0.3 * r.mat2()))));
    if ((f2 - f).cwiseAbs().maxCoeff() > 1e-8) ++failures;
  }
  EXPECT_EQ(failures, 0);
}

TEST(DualBasis, EquivariantUnderSymplecticMaps) {
  Rng r(11);
  for (int trial = 0; trial < 200; ++trial) {
    Plane4 v = random_plane(r), w = random_lagrangian(r);
    if (transversality(v, w) < 1e-4) continue;
    Mat4 s = random_symplectic(r);
    Basis4x2 f = dual_basis(v, w);
    Basis4x2 fs = dual_basis(map(s, v), map(s, w));
    EXPECT_LE((fs - s * f).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(DualBasis, Errors) {
  Plane4 v(unit(0), unit(1));
  try {
    dual_basis(v, Plane4(unit(0), unit(2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotLagrangian);
  }
  try {
    dual_basis(v, Plane4(unit(0), unit(3)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotTransverse);
  }
}

TEST(Extend, IdentityData) {
  Rng r(3);
  Plane4 v = random_plane(r), w = random_lagrangian(r);
  Mat4 phi = extend_symplectomorphism(v, w, v, w, Mat2::Identity());
  EXPECT_LE((phi - Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Extend, RotationInIsotropicPlane) {
  Plane4 v(unit(0), unit(1)), w(unit(2), unit(3));
  double a = 0.7;
  Mat2 rot;
  rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  Mat4 phi = extend_symplectomorphism(v, w, v, w, rot);
  EXPECT_LE(symplectic_defect(phi), 1e-10);
  EXPECT_LE((phi.topLeftCorner<2, 2>() - rot).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Extend, RandomDataIsSymplecticAndCarriesW) {
  Rng r(77);
  int failures = 0, trials = 0;
  while (trials < 1000) {
    Plane4 v0 = random_plane(r), w0 = random_lagrangian(r), w1 = random_lagrangian(r);
    Mat4 s = random_symplectic(r);
    // V1 and phi taken from a symplectic map so the restricted form is preserved
    Plane4 v1 = map(s, v0);
    Mat2 phi = Mat2::Identity();
    if (transversality(v0, w0) < 1e-4 || transversality(v1, w1) < 1e-4) continue;
    ++trials;
    Mat4 ext = extend_symplectomorphism(v0, w0, v1, w1, phi);
    Mat4 stacked;
    stacked << ext * w0.basis, w1.basis;
    bool ok = symplectic_defect(ext) <= 1e-9 && rank_of(stacked) == 2 &&
              (ext * v0.basis - v1.basis).cwiseAbs().maxCoeff() <= 1e-9;
    if (!ok) ++failures;
  }
  EXPECT_EQ(failures, 0);
}

TEST(Extend, FunctorialOnComposableData) {
  Rng r(8);
  for (int trial = 0; trial < 200; ++trial) {
    Plane4 v0 = random_plane(r);
    Plane4 w0 = random_lagrangian(r), w1 = random_lagrangian(r), w2 = random_lagrangian(r);
    Plane4 v1 = map(random_symplectic(r), v0);
    Plane4 v2 = map(random_symplectic(r), v1);
    if (transversality(v0, w0) < 1e-3 || transversality(v1, w1) < 1e-3 || transversality(v2, w2) < 1e-3) continue;
    Mat2 id = Mat2::Identity();
    Mat4 a = extend_symplectomorphism(v0, w0, v1, w1, id);
    Mat4 b = extend_symplectomorphism(v1, w1, v2, w2, id);
    Mat4 ab = extend_symplectomorphism(v0, w0, v2, w2, id);
    EXPECT_LE((ab - b * a).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, ab.cwiseAbs().maxCoeff()));
  }
}

TEST(Extend, RejectsFormBreakingPhi) {
  // w0 on <e1, e3> is 1, phi scaling by 2 doubles it
  Plane4 v(unit(0), unit(2)), w(unit(1), unit(3));
  try {
    extend_symplectomorphism(v, w, v, w, 2 * Mat2::Identity());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FormNotPreserved);
  }
}
