#pragma once

// Independent brute-force references. Nothing here calls the estimators under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "spherefrac/great_circle.hpp"
#include "spherefrac/random.hpp"
#include "spherefrac/sphere_geometry.hpp"

namespace oracle {

constexpr double pi = std::numbers::pi;

// Circular distance on [0, 2π).
inline double circ_dist(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * pi);
  return std::min(d, 2.0 * pi - d);
}

struct Node {
  double x, w;
};

// Midpoint nodes on [a, b] after the endpoint-clustering map u ↦ u^q/(u^q + (1−u)^q).
inline std::vector<Node> graded_midpoint(double a, double b, int m, double q) {
  std::vector<Node> out;
  const double L = b - a;
  for (int i = 0; i < m; ++i) {
    const double u = (i + 0.5) / m;
    const double A = std::pow(u, q), B = std::pow(1.0 - u, q);
    const double g = A / (A + B);
    const double dg = q * (std::pow(u, q - 1.0) * B + A * std::pow(1.0 - u, q - 1.0)) / ((A + B) * (A + B));
    out.push_back({a + L * g, L * dg / m});
  }
  return out;
}

// ∫_E ∫_{E^c} δ^{−(1+s)} on S¹ by a graded midpoint rule with `total` nodes per direction, split between
// pieces in proportion to their length (at least 64 each, so short pieces still resolve their corners). For every outer node the gaps are also cut at its
// antipode, where δ has a kink that a tensor grid would not resolve.
inline double circle_midpoint(const spherefrac::ArcUnion& E, double s, int total = 2000, double q = 3.0) {
  auto count = [&](double len) { return std::max(64, static_cast<int>(std::lround(total * len / (2.0 * pi)))); };
  std::vector<Node> in;
  for (const auto& p : E.arcs())
    for (const auto& nd : graded_midpoint(p.start, p.start + p.length, count(p.length), q)) in.push_back(nd);
  const auto gaps = E.gaps();
  double sum = 0.0;
  for (const auto& a : in) {
    double row = 0.0;
    for (const auto& g : gaps) {
      const double lo = g.start, hi = g.start + g.length;
      std::vector<double> cuts = {lo};
      for (double c : {a.x + pi, a.x - pi, a.x + 3.0 * pi, a.x - 3.0 * pi})
        if (c > lo + 1e-12 && c < hi - 1e-12) cuts.push_back(c);
      cuts.push_back(hi);
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        for (const auto& b : graded_midpoint(cuts[k], cuts[k + 1], count(cuts[k + 1] - cuts[k]), q))
          row += b.w * std::pow(circ_dist(a.x, b.x), -(1.0 + s));
    }
    sum += a.w * row;
  }
  return sum;
}

// ∫_E ∫_{I∖E} |x−y|^{−(1+s)} 1[|x−y| < ε] on a finite window of ℝ; E a list of [a, b] pieces inside I.
inline double line_midpoint(const std::vector<std::pair<double, double>>& E, double lo, double hi, double s,
                            double eps, int per_piece = 1500) {
  std::vector<Node> in, out;
  double cur = lo;
  for (const auto& [a, b] : E) {
    if (a > cur) for (const auto& nd : graded_midpoint(cur, a, per_piece, 3.0)) out.push_back(nd);
    for (const auto& nd : graded_midpoint(a, b, per_piece, 3.0)) in.push_back(nd);
    cur = b;
  }
  if (hi > cur) for (const auto& nd : graded_midpoint(cur, hi, per_piece, 3.0)) out.push_back(nd);
  double sum = 0.0;
  for (const auto& a : in)
    for (const auto& b : out) {
      const double d = std::abs(a.x - b.x);
      if (d < eps) sum += a.w * b.w * std::pow(d, -(1.0 + s));
    }
  return sum;
}

// ω_n ∫_0^r sin^{n−1} by composite Simpson (n ≥ 1).
inline double cap_area_simpson(int n, double r, int m = 20000) {
  const double h = r / m;
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::pow(std::sin(i * h), n - 1);
  }
  return spherefrac::omega(n) * acc * h / 3.0;
}

// Perimeter of a spherical polygon on S² given by outward normals: enumerate vertices ±(u_i × u_j) that
// satisfy every constraint, then sum the great-circle edge lengths between the two vertices of each face.
inline double polygon_perimeter(const std::vector<Eigen::Vector3d>& normals) {
  std::vector<Eigen::Vector3d> verts;
  for (std::size_t i = 0; i < normals.size(); ++i)
    for (std::size_t j = i + 1; j < normals.size(); ++j) {
      Eigen::Vector3d v = normals[i].cross(normals[j]);
      if (v.norm() < 1e-12) continue;
      v.normalize();
      for (int sgn : {1, -1}) {
        const Eigen::Vector3d w = sgn * v;
        bool ok = true;
        for (const auto& u : normals) ok = ok && w.dot(u) <= 1e-12;
        if (ok) verts.push_back(w);
      }
    }
  double total = 0.0;
  for (const auto& u : normals) {
    std::vector<Eigen::Vector3d> on;
    for (const auto& v : verts)
      if (std::abs(v.dot(u)) < 1e-9) {
        bool dup = false;
        for (const auto& w : on) dup = dup || (w - v).norm() < 1e-9;
        if (!dup) on.push_back(v);
      }
    if (on.size() == 2) total += std::acos(std::clamp(on[0].dot(on[1]), -1.0, 1.0));
  }
  return total;
}

// Plain pair sampling of ∬ g(x, y) over Sⁿ × Sⁿ: mean and standard error of ω² g.
struct PairMc {
  double mean, se;
};
inline PairMc pair_mc(int n, const std::function<double(const spherefrac::Vec&, const spherefrac::Vec&)>& g,
                      std::size_t N, std::uint64_t seed) {
  spherefrac::RandomStream r(seed);
  const double w = spherefrac::sphere_surface(n);
  double m = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const spherefrac::Vec x = spherefrac::sample_uniform(n, r), y = spherefrac::sample_uniform(n, r);
    const double v = w * w * g(x, y);
    m += v;
    m2 += v * v;
  }
  m /= N;
  m2 /= N;
  return {m, std::sqrt(std::max(0.0, m2 - m * m) / (N - 1))};
}

}  // namespace oracle
