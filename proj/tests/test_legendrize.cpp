#include <gtest/gtest.h>

#include <cmath>

#include "lagconc/legendrize.hpp"
#include "test_support.hpp"

using namespace lagconc;

namespace {

TransverseProfile profile(int M, double eps, double (*f)(double)) {
  TransverseProfile t;
  t.epsilon_band = eps;
  for (int j = 0; j < M; ++j) t.f.push_back(f(kTwoPi * j / M));
  return t;
}

int sign_of_target_at(const TransverseProfile& t, double theta) {
  std::vector<double> p(t.f.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = -t.f[j];
  double v = interp_periodic(p, theta);
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

double zero_f(double) { return 0.0; }
double neg_const(double) { return -0.05; }
double sine(double th) { return std::sin(th); }
double wave(double th) { return 0.3 * std::sin(th) + 0.2 * std::cos(3 * th) + 0.05; }

}  // namespace

TEST(Zigzag, FlatTargetNeedsNothing) {
  auto r = zigzag_approximate(profile(64, 0.1, zero_f), 0, 0);
  EXPECT_EQ(r.k_plus, 0);
  EXPECT_EQ(r.k_minus, 0);
  for (double z : r.front.z) EXPECT_EQ(z, 0.0);
  for (double p : r.front.p) EXPECT_EQ(p, 0.0);
  EXPECT_TRUE(r.front.cusps.empty());
}

TEST(Zigzag, ConstantPositiveSlopeGivesSawtooth) {
  auto t = profile(256, 0.05, neg_const);
  auto r = zigzag_approximate(t, 0, 0);
  EXPECT_EQ(r.k_minus, 0);
  EXPECT_GT(r.k_plus, 0);
  // target rises 2 pi c overall; each tooth drops at most about 2 eps/3 + the closing residual
  EXPECT_GE(r.k_plus, static_cast<int>(std::floor(kTwoPi * 0.05 / (2 * 0.05 / 3 + 0.05 / 3))));
  EXPECT_LE(r.p_error, r.tol_p);
  EXPECT_LE(r.sup_abs_z, 0.05);
  EXPECT_EQ(r.front.cusps.size(), 2u * r.k_plus);
  for (const auto& zz : r.front.zigzags) EXPECT_EQ(zz.sign, +1);
}

TEST(Zigzag, SineUsesBothSignsWhereTheyBelong) {
  auto t = profile(512, 0.15, sine);
  auto r = zigzag_approximate(t, 3, 3);
  EXPECT_GE(r.k_plus, 3);
  EXPECT_GE(r.k_minus, 3);
  for (const auto& zz : r.front.zigzags) EXPECT_EQ(zz.sign, sign_of_target_at(t, zz.theta)) << zz.theta;
  EXPECT_LE(r.sup_abs_z, 0.15);
}

TEST(Zigzag, PaddingReachesRequestedCounts) {
  auto t = profile(512, 0.15, sine);
  auto base = zigzag_approximate(t, 0, 0);
  auto padded = zigzag_approximate(t, base.k_plus + 4, base.k_minus + 2);
  EXPECT_GE(padded.k_plus, base.k_plus + 4);
  EXPECT_GE(padded.k_minus, base.k_minus + 2);
  int pads = 0;
  for (const auto& zz : padded.front.zigzags) {
    if (zz.padding) ++pads;
    EXPECT_EQ(zz.sign, sign_of_target_at(t, zz.theta));
  }
  EXPECT_GE(pads, 6);
}

TEST(Zigzag, BandIsAHardConstraint) {
  for (double eps : {0.1, 0.2, 0.4}) {
    auto r = zigzag_approximate(profile(512, eps, wave), 2, 2);
    auto s = front_to_slice(r.front);
    for (double z : s.z) EXPECT_LE(std::abs(z), eps);
    EXPECT_LE(r.sup_abs_z, eps);
  }
}

TEST(Zigzag, TooNarrowBandIsReported) {
  try {
    zigzag_approximate(profile(64, 1e-3, sine), 0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BandTooNarrow);
  }
  EXPECT_THROW(zigzag_approximate(profile(8, 0.1, sine), 0, 0), Error);
  EXPECT_THROW(zigzag_approximate(profile(64, 0.0, sine), 0, 0), Error);
}

TEST(Zigzag, CountIsStableUnderRefinement) {
  for (double eps : {0.15, 0.3}) {
    auto a = zigzag_approximate(profile(512, eps, wave), 0, 0);
    auto b = zigzag_approximate(profile(1024, eps, wave), 0, 0);
    EXPECT_EQ(a.k_plus, b.k_plus);
    EXPECT_EQ(a.k_minus, b.k_minus);
  }
}

TEST(FrontToSlice, FlatFrontIsZeroSection) {
  auto r = zigzag_approximate(profile(64, 0.1, zero_f), 0, 0);
  auto s = front_to_slice(r.front);
  EXPECT_EQ(action(s), 0.0);
  EXPECT_TRUE(reeb_chords(s).empty());
  EXPECT_EQ(rotation_number(s), 0);
}

TEST(FrontToSlice, OneZigzagHasAChord) {
  // constant slope small enough that a single closing zig-zag suffices
  auto t = profile(128, 0.2, [](double) { return -0.005; });
  auto r = zigzag_approximate(t, 0, 0);
  ASSERT_EQ(r.k_plus + r.k_minus, 1);
  auto s = front_to_slice(r.front);
  EXPECT_EQ(lagconc::testing::brute_crossings(s).size(), 1u);
  EXPECT_GE(reeb_chords(s).size(), 1u);
}

TEST(FrontToSlice, ExactAndCountsMatchInvariants) {
  for (double eps : {0.1, 0.2}) {
    auto r = zigzag_approximate(profile(512, eps, wave), 1, 1);
    auto s = front_to_slice(r.front);
    EXPECT_NEAR(action(s), 0.0, 1e-9);
    EXPECT_EQ(rotation_number(s), r.k_plus - r.k_minus);
    EXPECT_EQ(self_linking_reeb(s), -(r.k_plus + r.k_minus));
    EXPECT_EQ(lagconc::testing::brute_writhe(s), -(r.k_plus + r.k_minus));
  }
}

TEST(FrontToSlice, CuspsComeInPairsWithMatchingSlopes) {
  auto r = zigzag_approximate(profile(512, 0.2, wave), 0, 0);
  const auto& fr = r.front;
  EXPECT_EQ(fr.cusps.size(), 2 * fr.zigzags.size());
  EXPECT_EQ(fr.arcs().size(), fr.cusps.size() + 1);
  for (const auto& zz : fr.zigzags) EXPECT_LT(zz.cusp_a, zz.cusp_b);
}

TEST(FrontToSlice, RejectsDegenerateFronts) {
  FrontCurve fr;
  fr.theta = {0.0, 1.0, 1.0, kTwoPi};
  fr.p = {0.0, 0.0, 0.0, 0.0};
  fr.z = {0.0, 0.0, 0.0, 0.0};
  try {
    front_to_slice(fr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CuspResolutionFailure);
  }
}
