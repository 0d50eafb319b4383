#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "spherefrac/integration.hpp"
#include "spherefrac/sets.hpp"

namespace spherefrac {

/// Where s sits relative to the dimension: (0,1), [−n, 0], or (−∞, −n).
enum class Regime { Positive, Mild, Smooth };
Regime classify_s(int n, double s);
/// Throws DomainError("s must be < 1") and friends.
void check_s(double s);

enum class Method { Auto, Mc, CapOracle, CircleExact, ClosedForm };
std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct PerimeterResult {
  double value = 0.0;
  Method method = Method::Auto;
  /// MC standard error, or the requested relative tolerance times |value| for quadrature.
  double error = 0.0;
  std::size_t samples = 0;
};

/// Kernel convention: d^{−(n+s)} (default) or the normalized (d/π)^{−(n+s)}.
struct KernelOptions {
  bool normalized = false;
};

/// Monte Carlo estimate of P_s(E) = ∫_E ∫_{E^c} d(x,y)^{−(n+s)}.
///
/// For s ≥ 0 and E a disjoint family of caps, x is drawn in cap-local coordinates with its distance δ to
/// the boundary sampled ∝ δ^{−s}, and the partner at distance θ ≥ δ from a θ^{−(1+s)} shell; all
/// weights are formed in logs so that boundary distances far below double precision still count. Other
/// sets: x uniform, θ from the radial kernel (s < 0) or from a shell above boundary_distance (s ≥ 0).
Estimate perimeter_mc(int n, const SetHandle& E, double s, std::size_t N, const RandomStream& rng,
                      KernelOptions kernel = {});

/// Quadrature value of P_s for an open cap of radius r, relative error ≤ tol.
double perimeter_cap(int n, double s, double r, double tol = std::numeric_limits<double>::quiet_NaN());

/// Default tolerance of perimeter_cap.
double default_cap_tol(double s);

/// Cosine of the azimuth at which the distance-θ sphere around a point at depth δ inside a cap of
/// radius r crosses the cap boundary, written without the cancellation of the textbook form
/// (cos r − cos t cos θ)/(sin t sin θ), t = r − δ.
double cap_exit_cosine(double r, double delta, double theta);
/// Same with δ/θ supplied separately (δ and θ may both underflow).
double cap_exit_cosine(double r, double delta, double theta, double delta_over_theta);

/// P_{−n}(E) = α(ω_{n+1} − α).
double perimeter_minus_n(int n, double alpha);

/// Exact ∫_E ∫_{E^c} δ(φ,ψ)^{−(1+s)} on S¹ (s < 1, s ≠ 0).
double perimeter_circle_exact(const ArcUnion& E, double s);

struct Interval1D {
  double a, b;
};

/// Exact ∫_E ∫_{I∖E} |x−y|^{−(1+s)} 1[|x−y| < ε] on a line, I = [I_lo, I_hi] possibly infinite,
/// E a family of disjoint closed intervals inside I; 0 < s < 1.
double interval_perimeter_exact(const std::vector<Interval1D>& E, double I_lo, double I_hi, double s,
                                double eps = std::numeric_limits<double>::infinity());

/// Closed form of the ε-localized contribution of one isolated boundary point:
/// (1/s)(ε^{1−s}/(1−s) − ε^{1−s}).
double localized_boundary_term(double s, double eps);

/// ∬ |f(x)−f(y)|^p · d̃(x,y)^{−(n+sp)} with d̃ = d/π (normalized by default), s < 0.
Estimate seminorm_mc(int n, const std::function<double(const Vec&)>& f, double p, double s, std::size_t N,
                     const RandomStream& rng, KernelOptions kernel = {true});

/// tⁿ ω_n ∫_{π−δ}^{π} sin^{n−1}θ (θ/π)^{tp−n} dθ.
double antipodal_concentration_quad(int n, double p, double t, double delta);

/// c_{n,p} = ω_n π^n (n−1)!/p^n.
double concentration_constant(int n, double p);

struct PerimeterOptions {
  Method method = Method::Auto;
  std::size_t samples = 1000000;
  double tol = std::numeric_limits<double>::quiet_NaN();
  KernelOptions kernel;
  RandomStream rng{};
};

/// Dispatching front end: closed form at s = −n, circle formula for n = 1, cap oracle for single caps,
/// Monte Carlo otherwise (or as requested).
PerimeterResult perimeter(int n, const SetHandle& E, double s, const PerimeterOptions& opt = {});

}  // namespace spherefrac
