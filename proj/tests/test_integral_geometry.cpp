#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spherefrac/integral_geometry.hpp"

using namespace spherefrac;

namespace {
Vec pole(int n) {
  Vec v = Vec::Zero(n + 1);
  v(n) = 1.0;
  return v;
}
}  // namespace

TEST(SamplePlane, OrthonormalAndRotationInvariant) {
  RandomStream r(3);
  const Vec v = pole(3);
  Estimate spread;
  for (int i = 0; i < 20000; ++i) {
    const GreatCircle L = sample_plane(3, r);
    ASSERT_NEAR(L.e.norm(), 1.0, 1e-12);
    ASSERT_NEAR(L.f.norm(), 1.0, 1e-12);
    ASSERT_NEAR(L.e.dot(L.f), 0.0, 1e-12);
    // Squared length of the projection of a fixed unit vector onto a Haar 2-plane of R^4 has mean 2/4.
    spread.add(std::pow(L.e.dot(v), 2) + std::pow(L.f.dot(v), 2));
  }
  EXPECT_NEAR(spread.value(), 0.5, 4.0 * spread.std_error());
  EXPECT_THROW(sample_plane(1, r), DomainError);
}

TEST(ParallelogramArea, IsSineOfAngle) {
  RandomStream r(1);
  for (int i = 0; i < 100; ++i) {
    const Vec x = sample_uniform(2, r), y = sample_uniform(2, r);
    EXPECT_NEAR(parallelogram_area(x, y), std::sqrt(std::max(0.0, 1 - std::pow(x.dot(y), 2))), 1e-12);
  }
}

TEST(BpConstant, Values) {
  EXPECT_NEAR(bp_constant(2), 2 * kPi, 1e-13);
  EXPECT_NEAR(bp_constant(3), 2 * kPi * kPi * 4 * kPi / (2 * 2 * kPi), 1e-12);
}

TEST(CircleDoubleIntegral, ConstantKernel) {
  RandomStream r(2);
  for (int n : {2, 3, 4}) {
    const GreatCircle L = sample_plane(n, r);
    // 2π ∫_0^{2π} |sin u|^{n−1} du = 2π · 4 ∫_0^{π/2} sin^{n−1}.
    const double inner = 2.0 * beta(0.5, n / 2.0);
    const double v = circle_double_integral([](const Vec&, const Vec&) { return 1.0; }, L, n);
    EXPECT_NEAR(v, 2 * kPi * inner, 1e-10 * v) << n;
  }
}

TEST(BpCheck, ConstantKernelBothSidesSixteenPiSquared) {
  const BpResult r = bp_check(2, [](const Vec&, const Vec&) { return 1.0; }, 1000, 50, RandomStream(4));
  EXPECT_NEAR(r.lhs.value(), 16 * kPi * kPi, 1e-9);
  EXPECT_NEAR(r.rhs.value(), 16 * kPi * kPi, 1e-9);
}

TEST(BpCheck, SmoothKernelSmallRun) {
  auto f = [](const Vec& x, const Vec& y) { return std::pow(1.0 + x.dot(y), 2); };
  const BpResult r = bp_check(2, f, 200000, 200, RandomStream(5));
  // ∬ (1 + x·y)² = ω₃² (1 + 1/3).
  EXPECT_NEAR(r.lhs.value(), 16 * kPi * kPi * 4.0 / 3.0, 4.0 * r.lhs.std_error());
  EXPECT_NEAR(r.rhs.value(), 16 * kPi * kPi * 4.0 / 3.0, 4.0 * r.rhs.std_error() + 1e-8);
}

TEST(Crofton, CapMeanCrossings) {
  for (double rad : {0.5, 2.0}) {
    const CroftonResult c = crofton_estimate(2, SetHandle::cap(pole(2), rad), 20000, RandomStream(7));
    EXPECT_FALSE(c.odd_count_seen);
    ASSERT_TRUE(c.target);
    EXPECT_NEAR(*c.target, 2 * std::sin(rad), 1e-12);
    EXPECT_NEAR(c.mean_crossings.value(), *c.target, 4.0 * c.mean_crossings.std_error());
  }
}

TEST(Crofton, TargetIsScaledBoundaryMeasure) {
  EXPECT_NEAR(crofton_target(3, 4 * kPi), 2.0, 1e-14);
  EXPECT_THROW(crofton_estimate(2, SetHandle::cap(pole(3), 1.0), 10, RandomStream()), DomainError);
}
