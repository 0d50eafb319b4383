#include "spherefrac/integral_geometry.hpp"

#include <atomic>

#include "spherefrac/special_functions.hpp"

namespace spherefrac {

GreatCircle sample_plane(int n, RandomStream& rng) {
  if (n < 2) throw DomainError("sample_plane needs n >= 2");
  while (true) {
    Vec a(n + 1), b(n + 1);
    for (int i = 0; i <= n; ++i) a(i) = rng.normal();
    for (int i = 0; i <= n; ++i) b(i) = rng.normal();
    const double na = a.norm();
    if (na < 1e-12) continue;
    a /= na;
    b -= b.dot(a) * a;
    const double nb = b.norm();
    if (nb < 1e-12) continue;
    b /= nb;
    return {a, b};
  }
}

double parallelogram_area(const Vec& x, const Vec& y) {
  return std::sin(geodesic_distance(x, y));
}

double bp_constant(int n) { return omega(n + 1) * omega(n) / (omega(1) * omega(2)); }

double circle_double_integral(const PairKernel& f, const GreatCircle& L, int n) {
  constexpr int kPhi = 256, kHalf = 128;
  static const GaussRule gl = gauss_legendre(kHalf);
  // u nodes and weights on [0, 2π], weight already multiplied by |sin u|^{n−1}.
  static thread_local std::vector<double> cu, su, wu;
  static thread_local int cached_n = -1;
  if (cached_n != n) {
    cu.clear();
    su.clear();
    wu.clear();
    for (int half = 0; half < 2; ++half)
      for (int j = 0; j < kHalf; ++j) {
        const double u = half * kPi + 0.5 * kPi * (gl.nodes[j] + 1.0);
        cu.push_back(std::cos(u));
        su.push_back(std::sin(u));
        wu.push_back(0.5 * kPi * gl.weights[j] * std::pow(std::abs(std::sin(u)), n - 1));
      }
    cached_n = n;
  }
  const double hphi = 2.0 * kPi / kPhi;
  Vec x(L.e.size()), dx(L.e.size()), y(L.e.size());
  double total = 0.0;
  for (int i = 0; i < kPhi; ++i) {
    const double phi = hphi * i;
    x = std::cos(phi) * L.e + std::sin(phi) * L.f;
    dx = -std::sin(phi) * L.e + std::cos(phi) * L.f;
    double row = 0.0;
    for (std::size_t j = 0; j < wu.size(); ++j) {
      y = cu[j] * x + su[j] * dx;
      row += wu[j] * f(x, y);
    }
    total += row;
  }
  return total * hphi;
}

BpResult bp_check(int n, const PairKernel& f, std::size_t N_pairs, std::size_t M_planes, const RandomStream& rng) {
  if (n < 2) throw DomainError("bp_check needs n >= 2");
  const double w = sphere_surface(n);
  BpResult out;
  out.lhs = mc_estimate(
      [&](RandomStream& r) {
        const Vec x = sample_uniform(n, r), y = sample_uniform(n, r);
        return w * w * f(x, y);
      },
      N_pairs, rng.split(1));
  const double cn = bp_constant(n);
  McOptions opt;
  opt.chunk_size = 16;
  out.rhs = mc_estimate(
      [&](RandomStream& r) { return cn * circle_double_integral(f, sample_plane(n, r), n); }, M_planes, rng.split(2),
      opt);
  return out;
}

double crofton_target(int n, double boundary_measure) { return 2.0 / omega(n) * boundary_measure; }

CroftonResult crofton_estimate(int n, const SetHandle& E, std::size_t M_planes, const RandomStream& rng) {
  if (E.dim() != n) throw DomainError("crofton_estimate: set dimension mismatch");
  CroftonResult out;
  std::atomic<std::size_t> resampled{0};
  std::atomic<bool> odd{false};
  out.mean_crossings = mc_estimate(
      [&](RandomStream& r) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
          const GreatCircle L = sample_plane(n, r);
          const CrossingCount c = crossing_count(E, L);
          if (c.degenerate) {
            ++resampled;
            continue;
          }
          if (c.count % 2 != 0) odd = true;
          return static_cast<double>(c.count);
        }
        throw NumericalError("crofton_estimate: every sampled circle was degenerate");
      },
      M_planes, rng);
  out.resampled = resampled;
  out.odd_count_seen = odd;
  if (auto b = E.boundary_measure()) out.target = crofton_target(n, *b);
  return out;
}

}  // namespace spherefrac
