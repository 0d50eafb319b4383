#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spherefrac/sphere_geometry.hpp"

using namespace spherefrac;

namespace {
Vec e(int dim, int k) {
  Vec v = Vec::Zero(dim);
  v(k) = 1.0;
  return v;
}
}  // namespace

TEST(Omega, LowIndexValues) {
  EXPECT_DOUBLE_EQ(omega(1), 2.0);
  EXPECT_NEAR(omega(2), 2.0 * kPi, 1e-14);
  EXPECT_NEAR(omega(3), 4.0 * kPi, 1e-13);
  EXPECT_NEAR(omega(4), 2.0 * kPi * kPi, 1e-13);
  EXPECT_NEAR(sphere_surface(4), 8.0 * kPi * kPi / 3.0, 1e-12);
}

TEST(GeodesicDistance, KnownAngles) {
  EXPECT_NEAR(geodesic_distance(e(3, 0), e(3, 1)), kPi / 2, 1e-15);
  EXPECT_NEAR(geodesic_distance(e(3, 0), Vec(-e(3, 0))), kPi, 1e-15);
  EXPECT_EQ(geodesic_distance(e(3, 2), e(3, 2)), 0.0);
}

TEST(GeodesicDistance, TinyAndNearAntipodalAnglesKeepRelativeAccuracy) {
  for (double t : {1e-12, 1e-9, 1e-6}) {
    Vec y(3);
    y << std::cos(t), std::sin(t), 0.0;
    EXPECT_NEAR(geodesic_distance(e(3, 0), y) / t, 1.0, 1e-9) << t;
    Vec z(3);
    z << -std::cos(t), std::sin(t), 0.0;
    EXPECT_NEAR(kPi - geodesic_distance(e(3, 0), z), t, 1e-15) << t;
  }
}

TEST(GeodesicDistance, DimensionMismatchThrows) {
  EXPECT_THROW(geodesic_distance(e(3, 0), e(4, 0)), DomainError);
}

TEST(CapArea, ClosedFormsInLowDimension) {
  for (double r : {0.1, 0.7, kPi / 2, 2.5, 3.1}) {
    EXPECT_NEAR(cap_area(1, r), 2.0 * r, 1e-13);
    EXPECT_NEAR(cap_area(2, r), 2.0 * kPi * (1.0 - std::cos(r)), 1e-12);
    EXPECT_NEAR(cap_area(3, r), 2.0 * kPi * r - kPi * std::sin(2.0 * r), 1e-11);
  }
}

TEST(CapArea, MatchesSimpsonInHigherDimension) {
  for (int n : {4, 5, 7})
    for (double r : {0.2, 1.0, 2.0, 3.0})
      EXPECT_NEAR(cap_area(n, r) / oracle::cap_area_simpson(n, r), 1.0, 1e-10) << n << " " << r;
}

TEST(CapArea, EndpointsAndHalf) {
  for (int n : {1, 2, 3, 6}) {
    EXPECT_EQ(cap_area(n, 0.0), 0.0);
    EXPECT_NEAR(cap_area(n, kPi), sphere_surface(n), 1e-12 * sphere_surface(n));
    EXPECT_NEAR(cap_area(n, kPi / 2), 0.5 * sphere_surface(n), 1e-12 * sphere_surface(n));
  }
}

TEST(VolumeRadius, InvertsCapArea) {
  for (int n : {1, 2, 3, 5})
    for (double r : {1e-3, 0.4, 1.3, 2.8, kPi - 1e-3}) {
      // Near π the area is flat in r, so only the measure round trip is well conditioned there.
      if (r < 3.0)
        EXPECT_NEAR(volume_radius(n, cap_area(n, r)), r, 1e-12);
      const double a = cap_area(n, r);
      EXPECT_NEAR(cap_area(n, volume_radius(n, a)), a, 1e-14 * sphere_surface(n));
    }
  EXPECT_THROW(volume_radius(2, -1.0), DomainError);
  EXPECT_THROW(volume_radius(2, 5.0 * kPi), DomainError);
}

TEST(Sampling, UniformPointsHitCapsInProportion) {
  RandomStream rng(11);
  const int n = 3, N = 200000;
  const double r = 1.1;
  int hits = 0;
  for (int i = 0; i < N; ++i) {
    const Vec x = sample_uniform(n, rng);
    ASSERT_NEAR(x.norm(), 1.0, 1e-12);
    hits += geodesic_distance(x, e(n + 1, 0)) < r;
  }
  const double p = cap_area(n, r) / sphere_surface(n);
  EXPECT_NEAR(hits / double(N), p, 4.0 * std::sqrt(p * (1 - p) / N));
}

TEST(Sampling, PointsAtDistanceHaveThatDistance) {
  RandomStream rng(3);
  for (int n : {1, 2, 4}) {
    const Vec x = sample_uniform(n, rng);
    for (double t : {1e-7, 0.3, 1.9, kPi - 1e-4}) {
      const Vec y = sample_at_distance(x, t, rng);
      EXPECT_NEAR(y.norm(), 1.0, 1e-12);
      EXPECT_NEAR(geodesic_distance(x, y), t, 1e-11);
    }
    const Vec u = sample_tangent(x, rng);
    EXPECT_NEAR(u.dot(x), 0.0, 1e-12);
    EXPECT_NEAR(u.norm(), 1.0, 1e-12);
  }
}

TEST(SliceCapFraction, MatchesSampledTangentDirections) {
  RandomStream rng(5);
  for (int n : {2, 3, 4}) {
    const Vec x = e(n + 1, 0), axis = e(n + 1, 1);
    for (double phi : {0.3, 1.2, 2.6}) {
      int hits = 0;
      const int N = 100000;
      for (int i = 0; i < N; ++i) hits += std::acos(sample_tangent(x, rng).dot(axis)) > phi;
      const double p = slice_cap_fraction(n, phi);
      EXPECT_NEAR(hits / double(N), p, 4.0 * std::sqrt(p * (1 - p) / N) + 1e-12) << n << " " << phi;
    }
  }
}

TEST(Sinc, SeriesBranchIsContinuous) {
  EXPECT_NEAR(sinc(0.99e-4), std::sin(0.99e-4) / 0.99e-4, 4e-16);
  EXPECT_NEAR(sinc(1.01e-4), std::sin(1.01e-4) / 1.01e-4, 1e-16);
  EXPECT_EQ(sinc(0.0), 1.0);
}

TEST(CheckSpherePoint, RejectsOffSphereAndTooShort) {
  EXPECT_THROW(check_sphere_point(Vec::Constant(3, 1.0)), DomainError);
  EXPECT_THROW(check_sphere_point(Vec::Constant(1, 1.0)), DomainError);
  EXPECT_NO_THROW(check_sphere_point(e(3, 0)));
}
