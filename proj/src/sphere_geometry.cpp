#include "spherefrac/sphere_geometry.hpp"

#include "spherefrac/special_functions.hpp"

namespace spherefrac {

void check_sphere_point(const Vec& x, double tol) {
  if (x.size() < 2) throw DomainError("sphere points need at least 2 coordinates (n >= 1)");
  if (!x.allFinite() || std::abs(x.norm() - 1.0) > tol)
    throw DomainError("point is not on the unit sphere (|x| = " + std::to_string(x.norm()) + ")");
}

double sphere_surface(int k) {
  if (k < 0) throw DomainError("sphere_surface needs k >= 0");
  switch (k) {
    case 0: return 2.0;
    case 1: return 2.0 * kPi;
    case 2: return 4.0 * kPi;
    default: break;
  }
  const double h = 0.5 * (k + 1);
  return 2.0 * std::exp(h * std::log(kPi) - std::lgamma(h));
}

double cap_area(int n, double r) {
  if (n < 1) throw DomainError("cap_area needs n >= 1");
  if (!(r >= 0.0 && r <= kPi)) throw DomainError("cap radius must lie in [0, pi], got " + std::to_string(r));
  if (n == 1) return 2.0 * r;
  if (n == 2) {
    const double h = std::sin(0.5 * r);
    return 4.0 * kPi * h * h;
  }
  if (r > 0.5 * kPi) return sphere_surface(n) - cap_area(n, kPi - r);
  const double h = std::sin(0.5 * r);
  return omega(n) * std::ldexp(1.0, n - 1) * incomplete_beta(h * h, 0.5 * n, 0.5 * n);
}

double volume_radius(int n, double alpha) {
  const double total = sphere_surface(n);
  if (!(alpha >= 0.0 && alpha <= total * (1.0 + 1e-15)))
    throw DomainError("measure must lie in [0, " + std::to_string(total) + "], got " + std::to_string(alpha));
  if (alpha == 0.0) return 0.0;
  if (alpha >= total) return kPi;
  double lo = 0.0, hi = kPi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cap_area(n, mid) < alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Vec sample_uniform(int n, RandomStream& rng) {
  if (n < 1) throw DomainError("sample_uniform needs n >= 1");
  Vec g(n + 1);
  double norm;
  do {
    for (int i = 0; i <= n; ++i) g(i) = rng.normal();
    norm = g.norm();
  } while (norm < 1e-12);
  return g / norm;
}

Vec sample_tangent(const Vec& x, RandomStream& rng) {
  Vec g(x.size());
  double norm;
  do {
    for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = rng.normal();
    g -= g.dot(x) * x;
    norm = g.norm();
  } while (norm < 1e-12);
  return g / norm;
}

Vec sample_at_distance(const Vec& x, double theta, RandomStream& rng) {
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("distance must lie in [0, pi]");
  const Vec u = sample_tangent(x, rng);
  Vec y = std::cos(theta) * x + std::sin(theta) * u;
  return y / y.norm();
}

double slice_cap_fraction(int n, double phi_star) {
  if (n < 2) throw DomainError("slice_cap_fraction needs n >= 2");
  if (!(phi_star >= 0.0 && phi_star <= kPi)) throw DomainError("slice angle must lie in [0, pi]");
  if (n == 2) return 1.0 - phi_star / kPi;
  if (n == 3) return 0.5 * (1.0 + std::cos(phi_star));
  return 1.0 - cap_area(n - 1, phi_star) / omega(n);
}

}  // namespace spherefrac
