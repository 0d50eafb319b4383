#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "spherefrac/great_circle.hpp"
#include "spherefrac/integration.hpp"
#include "spherefrac/sets.hpp"

namespace spherefrac {

/// Haar-distributed 2-plane of R^{n+1}: Gram–Schmidt of two Gaussian vectors.
GreatCircle sample_plane(int n, RandomStream& rng);

/// ∇₂(x, y) = √(1 − (x·y)²), the area of the parallelogram spanned by x and y.
double parallelogram_area(const Vec& x, const Vec& y);

/// c_n = ω_{n+1} ω_n / (ω₁ ω₂).
double bp_constant(int n);

using PairKernel = std::function<double(const Vec&, const Vec&)>;

/// ∬_{S∩L} f(x, y) ∇₂(x, y)^{n−1} on a great circle by 256 × 256 tensor quadrature.
///
/// Variables (φ, u = ψ − φ): trapezoid in φ (periodic), Gauss–Legendre on u ∈ [0, π] and [π, 2π] so that
/// the kink of |sin u| sits on a panel edge.
double circle_double_integral(const PairKernel& f, const GreatCircle& L, int n);

struct BpResult {
  Estimate lhs;  // ∬_{Sⁿ×Sⁿ} f
  Estimate rhs;  // c_n E_L[∬_{S∩L} f ∇₂^{n−1}]
};

/// Both sides of the spherical Blaschke–Petkantschin identity.
BpResult bp_check(int n, const PairKernel& f, std::size_t N_pairs, std::size_t M_planes, const RandomStream& rng);

struct CroftonResult {
  Estimate mean_crossings;
  std::size_t resampled = 0;        // tangent circles redrawn
  bool odd_count_seen = false;      // parity violation on a non-degenerate circle
  std::optional<double> target;     // (2/ω_n) H^{n−1}(∂E) when the boundary measure is known
};

/// Haar mean of H⁰(∂E ∩ L); degenerate (tangent) circles are redrawn.
CroftonResult crofton_estimate(int n, const SetHandle& E, std::size_t M_planes, const RandomStream& rng);

/// (2/ω_n)·boundary measure.
double crofton_target(int n, double boundary_measure);

}  // namespace spherefrac
