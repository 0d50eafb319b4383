#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "spherefrac/errors.hpp"
#include "spherefrac/random.hpp"

namespace spherefrac {

/// A point of Sⁿ ⊂ R^{n+1}.
using Vec = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;

/// n for a point of R^{n+1}.
inline int sphere_dim(const Vec& x) { return static_cast<int>(x.size()) - 1; }

/// Throws DomainError unless |x| = 1 within tol and x has at least 2 coordinates.
void check_sphere_point(const Vec& x, double tol = 1e-12);

/// Geodesic distance on the unit sphere.
///
/// Evaluated as 2·atan2(|x−y|, |x+y|), which equals arccos(x·y) but keeps full relative accuracy near
/// 0 and π where the clamped arccos loses half the digits.
template <class DA, class DB>
typename DA::Scalar geodesic_distance(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& y) {
  if (x.size() != y.size())
    throw DomainError("geodesic_distance: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()) + ")");
  using std::atan2;
  return typename DA::Scalar(2) * atan2((x - y).norm(), (x + y).norm());
}

/// Surface measure H^k(S^k) = 2π^{(k+1)/2}/Γ((k+1)/2). In the ω_{k+1} convention: ω₁=2, ω₂=2π, ω₃=4π.
double sphere_surface(int k);
/// ω_m = H^{m−1}(S^{m−1}).
inline double omega(int m) { return sphere_surface(m - 1); }

/// a(r) = H^n of an open cap of radius r on Sⁿ.
double cap_area(int n, double r);

/// Inverse of cap_area by bisection.
double volume_radius(int n, double alpha);

/// Uniform point on Sⁿ (normalized Gaussian vector).
Vec sample_uniform(int n, RandomStream& rng);

/// Uniform unit vector in the tangent space at x.
Vec sample_tangent(const Vec& x, RandomStream& rng);

/// cos θ·x + sin θ·u with u uniform on the unit tangent sphere at x.
Vec sample_at_distance(const Vec& x, double theta, RandomStream& rng);

/// Fraction of S^{n−1} whose angle to a fixed axis exceeds φ*: 1 − a_{n−1}(φ*)/ω_n.
double slice_cap_fraction(int n, double phi_star);

/// Sine cardinal sin(z)/z with the removable point filled.
inline double sinc(double z) {
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0);
  }
  return std::sin(z) / z;
}

}  // namespace spherefrac
